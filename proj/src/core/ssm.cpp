/*
 * Copyright (c) 2026, The seqmix Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "seqmix/ssm.hpp"

#include <cmath>

namespace seqmix {

void SsmSystem::validate() const {
  const std::size_t n = order();
  if (n < 1) throw ParamError("ssm: state order must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParamError("ssm: step size must be positive, got " + std::to_string(dt));
  if (a.cols() != n || b.rows() != n || b.cols() != 1 || c.rows() != 1 || c.cols() != n) {
    throw ShapeError("ssm: inconsistent system shapes A " + a.shape_string() + ", B " + b.shape_string() +
                     ", C " + c.shape_string());
  }
}

HippoMatrices hippo_legs_matrices(std::size_t order) {
  if (order < 1) throw ParamError("hippo: state order must be at least 1");
  HippoMatrices m{RealMat(order, order), RealMat(order, 1)};
  for (std::size_t n = 0; n < order; ++n) {
    const double rn = std::sqrt(2.0 * static_cast<double>(n) + 1.0);
    m.b(n, 0) = rn;
    for (std::size_t k = 0; k < n; ++k) m.a(n, k) = -rn * std::sqrt(2.0 * static_cast<double>(k) + 1.0);
    m.a(n, n) = -(static_cast<double>(n) + 1.0);
  }
  return m;
}

SsmSystem SsmSystem::hippo_legs(std::size_t order, double dt) {
  auto m = hippo_legs_matrices(order);
  SsmSystem sys{std::move(m.a), std::move(m.b), RealMat(1, order, 1.0), 0.0, dt};
  sys.validate();
  return sys;
}

DiscreteSystem discretize_bilinear(const SsmSystem &sys) {
  sys.validate();
  const std::size_t n = sys.order();
  const double half = 0.5 * sys.dt;
  RealMat lhs = RealMat::identity(n);
  RealMat rhs(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      lhs(i, j) -= half * sys.a(i, j);
      rhs(i, j) = (i == j ? 1.0 : 0.0) + half * sys.a(i, j);
    }
    rhs(i, n) = sys.dt * sys.b(i, 0);
  }
  const RealMat sol = solve(lhs, rhs);
  return {slice_cols(sol, 0, n), slice_cols(sol, n, n + 1)};
}

RecurrentResult ssm_run_recurrent(const Seq &x, const SsmSystem &sys) {
  const auto disc = discretize_bilinear(sys);
  const std::size_t n = sys.order(), len = x.len(), dim = x.dim();
  RealMat state(n, dim);
  RealMat y(len, dim);
  for (std::size_t t = 0; t < len; ++t) {
    const auto u = x.values().row(t);
    RealMat next = matmul(disc.a_bar, state);
    for (std::size_t i = 0; i < n; ++i) {
      const double bi = disc.b_bar(i, 0);
      for (std::size_t d = 0; d < dim; ++d) next(i, d) += bi * u[d];
    }
    state = std::move(next);
    for (std::size_t d = 0; d < dim; ++d) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += sys.c(0, i) * state(i, d);
      y(t, d) = acc + sys.feedthrough * u[d];
    }
  }
  return {Seq(std::move(y)), SsmState{std::move(state), len}};
}

Seq ssm_mix_recurrent(const Seq &x, const SsmSystem &sys) { return ssm_run_recurrent(x, sys).output; }

std::vector<double> ssm_kernel(const SsmSystem &sys, std::size_t len) {
  const auto disc = discretize_bilinear(sys);
  const std::size_t n = sys.order();
  std::vector<double> kernel(len);
  std::vector<double> s = disc.b_bar.column(0), next(n);
  for (std::size_t l = 0; l < len; ++l) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += sys.c(0, i) * s[i];
    kernel[l] = acc;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += disc.a_bar(i, j) * s[j];
      next[i] = v;
    }
    s.swap(next);
  }
  return kernel;
}

Seq ssm_mix_convolutional(const Seq &x, const SsmSystem &sys) {
  const auto kernel = ssm_kernel(sys, x.len());
  RealMat y = causal_convolve_columns(RealMat(kernel.size(), 1, kernel), x.values());
  if (sys.feedthrough != 0.0) y = add(y, scaled(x.values(), sys.feedthrough));
  return Seq(std::move(y));
}

std::vector<double> hippo_reconstruct(std::span<const double> coeffs, std::size_t step, std::size_t window,
                                      double dt) {
  if (coeffs.empty()) throw ParamError("hippo_reconstruct: no coefficients");
  if (window == 0 || window > step) {
    throw ParamError("hippo_reconstruct: window " + std::to_string(window) + " must be in [1, " +
                     std::to_string(step) + "]");
  }
  if (!(dt > 0.0)) throw ParamError("hippo_reconstruct: step size must be positive");
  std::vector<double> history(window);
  for (std::size_t i = 0; i < window; ++i) {
    const double lag = static_cast<double>(window - 1 - i);
    const double z = 2.0 * std::exp(-lag * dt) - 1.0;
    double p_prev = 1.0, p = z, acc = coeffs[0];
    for (std::size_t n = 1; n < coeffs.size(); ++n) {
      acc += coeffs[n] * std::sqrt(2.0 * static_cast<double>(n) + 1.0) * p;
      const double next = ((2.0 * static_cast<double>(n) + 1.0) * z * p - static_cast<double>(n) * p_prev) /
                          (static_cast<double>(n) + 1.0);
      p_prev = p;
      p = next;
    }
    history[i] = acc;
  }
  return history;
}

}  // namespace seqmix
