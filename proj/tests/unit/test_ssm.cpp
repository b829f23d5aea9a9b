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
#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "seqmix/ssm.hpp"

using namespace seqmix;

namespace {

SsmSystem integrator(double dt) {
  SsmSystem s;
  s.a = RealMat(1, 1, {0.0});
  s.b = RealMat(1, 1, {1.0});
  s.c = RealMat(1, 1, {1.0});
  s.dt = dt;
  return s;
}

SsmSystem random_stable(std::size_t n, unsigned seed, double dt) {
  SsmSystem s;
  s.a = oracle::gaussian(n, n, seed, 0.3);
  for (std::size_t i = 0; i < n; ++i) s.a(i, i) -= 2.0;
  s.b = oracle::gaussian(n, 1, seed + 1);
  s.c = oracle::gaussian(1, n, seed + 2);
  s.feedthrough = 0.25;
  s.dt = dt;
  return s;
}

Seq gaussian_seq(std::size_t len, std::size_t dim, unsigned seed) { return Seq(oracle::gaussian(len, dim, seed)); }

double reconstruction_error(const std::vector<double> &signal, std::size_t order, double dt, std::size_t skip) {
  const std::size_t L = signal.size();
  const auto r = ssm_run_recurrent(Seq(RealMat(L, 1, signal)), SsmSystem::hippo_legs(order, dt));
  const auto coeffs = r.state.x.column(0);
  const auto rec = hippo_reconstruct(coeffs, r.state.step, L, dt);
  double err = 0.0;
  for (std::size_t i = skip; i + skip < L; ++i) err = std::max(err, std::fabs(rec[i] - signal[i]));
  return err;
}

}  // namespace

TEST(Hippo, OrderOne) {
  const auto m = hippo_legs_matrices(1);
  EXPECT_EQ(m.a, RealMat(1, 1, {-1.0}));
  EXPECT_EQ(m.b, RealMat(1, 1, {1.0}));
}

TEST(Hippo, OrderTwo) {
  const auto m = hippo_legs_matrices(2);
  const double s3 = std::sqrt(3.0);
  EXPECT_LE(max_abs_diff(m.a, RealMat(2, 2, {-1.0, 0.0, -s3, -2.0})), 1e-15);
  EXPECT_LE(max_abs_diff(m.b, RealMat(2, 1, {1.0, s3})), 1e-15);
}

TEST(Hippo, LowerTriangularPattern) {
  const auto m = hippo_legs_matrices(16);
  for (std::size_t n = 0; n < 16; ++n) {
    const double dn = static_cast<double>(n);
    for (std::size_t k = 0; k < 16; ++k) {
      const double dk = static_cast<double>(k);
      const double expected = n > k    ? -std::sqrt(2.0 * dn + 1) * std::sqrt(2.0 * dk + 1)
                              : n == k ? -(dn + 1)
                                       : 0.0;
      EXPECT_NEAR(m.a(n, k), expected, 1e-12);
    }
    EXPECT_NEAR(m.b(n, 0), std::sqrt(2.0 * dn + 1), 1e-12);
  }
  EXPECT_THROW((void)hippo_legs_matrices(0), ParamError);
}

TEST(Hippo, DiscretizedTransitionIsStable) {
  for (std::size_t n : {1u, 8u, 64u, 256u}) {
    for (double dt : {1e-3, 0.05, 1.0, 10.0}) {
      const auto d = discretize_bilinear(SsmSystem::hippo_legs(n, dt));
      // Lower triangular, so the eigenvalues are the diagonal entries.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) EXPECT_LE(std::fabs(d.a_bar(i, j)), 1e-12);
        EXPECT_LE(std::fabs(d.a_bar(i, i)), 1.0 + 1e-6) << "n=" << n << " dt=" << dt;
      }
    }
  }
}

TEST(Discretize, PureIntegrator) {
  const auto d = discretize_bilinear(integrator(0.1));
  EXPECT_NEAR(d.a_bar(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(d.b_bar(0, 0), 0.1, 1e-15);
}

TEST(Discretize, SmallStepTaylorLimit) {
  SsmSystem s = integrator(1e-4);
  s.a(0, 0) = -1.0;
  const auto d = discretize_bilinear(s);
  EXPECT_LE(std::fabs(d.a_bar(0, 0) - (1.0 - 1e-4)), 1e-8);
}

TEST(Discretize, MatchesExplicitInverseOracle) {
  const SsmSystem s = random_stable(8, 30, 0.2);
  const auto d = discretize_bilinear(s);
  const auto [a_ref, b_ref] = oracle::bilinear(s.a, s.b, s.dt);
  EXPECT_LE(max_abs_diff(d.a_bar, a_ref), 1e-12);
  EXPECT_LE(max_abs_diff(d.b_bar, b_ref), 1e-12);
}

TEST(Discretize, SingularSystemIsNumericError) {
  SsmSystem s = integrator(0.5);
  s.a(0, 0) = 4.0;  // I - dt/2 A = 0
  try {
    (void)discretize_bilinear(s);
    FAIL() << "expected NumericError";
  } catch (const NumericError &e) {
    EXPECT_NE(std::string(e.what()).find("singular"), std::string::npos);
  }
}

TEST(SsmSystem, Validation) {
  EXPECT_THROW((void)SsmSystem::hippo_legs(4, 0.0), ParamError);
  EXPECT_THROW((void)SsmSystem::hippo_legs(4, -1.0), ParamError);
  SsmSystem s = SsmSystem::hippo_legs(4, 0.1);
  s.c = RealMat(1, 3);
  EXPECT_THROW(s.validate(), ShapeError);
  EXPECT_THROW((void)ssm_mix_recurrent(gaussian_seq(4, 1, 1), s), ShapeError);
}

TEST(Recurrent, ZeroInputZeroOutput) {
  const SsmSystem s = SsmSystem::hippo_legs(8, 0.1);
  EXPECT_EQ(ssm_mix_recurrent(Seq(RealMat(10, 3)), s).values(), RealMat(10, 3));
  EXPECT_EQ(ssm_mix_convolutional(Seq(RealMat(10, 3)), s).values(), RealMat(10, 3));
}

TEST(Recurrent, IntegratorGivesPrefixSums) {
  const RealMat u(5, 1, {1, 2, 3, 4, 5});
  const RealMat y = ssm_mix_recurrent(Seq(u), integrator(1.0)).values();
  EXPECT_EQ(y, RealMat(5, 1, {1, 3, 6, 10, 15}));
}

TEST(Recurrent, FinalStateMatchesOracleRecursion) {
  const SsmSystem s = random_stable(6, 31, 0.1);
  const Seq x = gaussian_seq(40, 2, 32);
  const auto r = ssm_run_recurrent(x, s);
  const auto [a_bar, b_bar] = oracle::bilinear(s.a, s.b, s.dt);
  EXPECT_EQ(r.state.step, 40u);
  for (std::size_t d = 0; d < 2; ++d) {
    RealMat state(6, 1);
    for (std::size_t t = 0; t < 40; ++t) {
      state = oracle::matmul(a_bar, state);
      for (std::size_t i = 0; i < 6; ++i) state(i, 0) += b_bar(i, 0) * x.values()(t, d);
      const double y = oracle::matmul(s.c, state)(0, 0) + s.feedthrough * x.values()(t, d);
      EXPECT_NEAR(r.output.values()(t, d), y, 1e-10);
    }
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(r.state.x(i, d), state(i, 0), 1e-10);
  }
}

TEST(Kernel, IntegratorKernelIsConstant) {
  const auto k = ssm_kernel(integrator(0.1), 6);
  for (double v : k) EXPECT_NEAR(v, 0.1, 1e-15);
}

TEST(Kernel, ScalarSystemIsGeometric) {
  SsmSystem s = integrator(0.5);
  s.a(0, 0) = -1.0;
  s.c(0, 0) = 3.0;
  const auto d = discretize_bilinear(s);
  const double a = d.a_bar(0, 0), b = d.b_bar(0, 0);
  const auto k = ssm_kernel(s, 10);
  for (std::size_t l = 0; l < 10; ++l) EXPECT_NEAR(k[l], 3.0 * std::pow(a, static_cast<double>(l)) * b, 1e-14);
}

TEST(Kernel, MatchesRepeatedSquaringOracle) {
  const SsmSystem s = SsmSystem::hippo_legs(32, 0.05);
  const auto [a_bar, b_bar] = oracle::bilinear(s.a, s.b, s.dt);
  const auto ref = oracle::ssm_kernel(a_bar, b_bar, s.c, 128);
  const auto k = ssm_kernel(s, 128);
  for (std::size_t l = 0; l < 128; ++l) EXPECT_NEAR(k[l], ref[l], 1e-9) << "l=" << l;
}

TEST(Convolutional, ImpulseReturnsKernel) {
  SsmSystem s = random_stable(5, 33, 0.1);
  const std::size_t L = 20;
  RealMat delta(L, 1);
  delta(0, 0) = 1.0;
  const RealMat y = ssm_mix_convolutional(Seq(delta), s).values();
  const auto k = ssm_kernel(s, L);
  for (std::size_t t = 0; t < L; ++t) EXPECT_NEAR(y(t, 0), k[t] + (t == 0 ? s.feedthrough : 0.0), 1e-12);
}

TEST(Duality, RecurrentEqualsConvolutional) {
  const SsmSystem s = SsmSystem::hippo_legs(64, 0.05);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Seq x = gaussian_seq(256, 4, seed);
    EXPECT_LE(max_abs_diff(ssm_mix_recurrent(x, s).values(), ssm_mix_convolutional(x, s).values()), 1e-5);
  }
  const Seq long_x = gaussian_seq(1024, 2, 99);
  EXPECT_LE(max_abs_diff(ssm_mix_recurrent(long_x, s).values(), ssm_mix_convolutional(long_x, s).values()), 1e-5);
  const SsmSystem r = random_stable(16, 34, 0.1);
  const Seq y = gaussian_seq(300, 3, 35);
  EXPECT_LE(max_abs_diff(ssm_mix_recurrent(y, r).values(), ssm_mix_convolutional(y, r).values()), 1e-9);
}

TEST(Linearity, SuperpositionAndHomogeneity) {
  const SsmSystem s = SsmSystem::hippo_legs(16, 0.1);
  const Seq x = gaussian_seq(64, 3, 36), y = gaussian_seq(64, 3, 37);
  const double alpha = 0.7, beta = -1.3;
  for (bool conv : {false, true}) {
    auto mix = [&](const Seq &v) { return conv ? ssm_mix_convolutional(v, s) : ssm_mix_recurrent(v, s); };
    const RealMat lhs = mix(Seq(add(scaled(x.values(), alpha), scaled(y.values(), beta)))).values();
    const RealMat rhs = add(scaled(mix(x).values(), alpha), scaled(mix(y).values(), beta));
    EXPECT_LE(relative_error(lhs, rhs), 1e-9);
  }
  // Scaling by a power of two commutes with every rounding step.
  EXPECT_EQ(ssm_mix_recurrent(Seq(scaled(x.values(), 2.0)), s).values(), scaled(ssm_mix_recurrent(x, s).values(), 2.0));
}

TEST(Causality, FutureTokensDoNotAffectThePast) {
  const SsmSystem s = SsmSystem::hippo_legs(16, 0.1);
  const Seq x = gaussian_seq(64, 2, 38);
  for (std::size_t t : {0u, 10u, 40u}) {
    RealMat perturbed = x.values();
    for (std::size_t j = t + 1; j < 64; ++j) perturbed(j, 0) += 5.0;
    const RealMat a = ssm_mix_recurrent(x, s).values(), b = ssm_mix_recurrent(Seq(perturbed), s).values();
    const RealMat ca = ssm_mix_convolutional(x, s).values(), cb = ssm_mix_convolutional(Seq(perturbed), s).values();
    for (std::size_t i = 0; i <= t; ++i) {
      EXPECT_EQ(a(i, 0), b(i, 0));
      EXPECT_EQ(a(i, 1), b(i, 1));
      EXPECT_NEAR(ca(i, 0), cb(i, 0), 1e-12);
    }
  }
}

TEST(PerDimension, ColumnsAreIndependent) {
  const SsmSystem s = SsmSystem::hippo_legs(12, 0.1);
  const Seq x = gaussian_seq(50, 4, 39);
  const RealMat full = ssm_mix_recurrent(x, s).values();
  const RealMat full_conv = ssm_mix_convolutional(x, s).values();
  for (std::size_t d = 0; d < 4; ++d) {
    const Seq col(slice_cols(x.values(), d, d + 1));
    EXPECT_EQ(ssm_mix_recurrent(col, s).values(), slice_cols(full, d, d + 1));
    EXPECT_EQ(ssm_mix_convolutional(col, s).values(), slice_cols(full_conv, d, d + 1));
  }
}

TEST(Reconstruct, ConstantSignalMiddleWindow) {
  const std::vector<double> ones(100, 1.0);
  EXPECT_LE(reconstruction_error(ones, 8, 0.1, 10), 0.05);
}

TEST(Reconstruct, OrderOneIsConstant) {
  const std::vector<double> coeffs{0.37};
  const auto rec = hippo_reconstruct(coeffs, 10, 10, 0.1);
  ASSERT_EQ(rec.size(), 10u);
  for (double v : rec) EXPECT_DOUBLE_EQ(v, 0.37);
}

TEST(Reconstruct, HigherOrderTracksSmoothSignalBetter) {
  const std::size_t L = 100;
  std::vector<double> sine(L);
  for (std::size_t t = 0; t < L; ++t) sine[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / L);
  const double e4 = reconstruction_error(sine, 4, 0.1, 10);
  const double e32 = reconstruction_error(sine, 32, 0.1, 10);
  EXPECT_LT(e32, e4);
}

TEST(Reconstruct, ArgumentErrors) {
  const std::vector<double> c{1.0, 0.0};
  EXPECT_THROW((void)hippo_reconstruct(c, 5, 0, 0.1), ParamError);
  EXPECT_THROW((void)hippo_reconstruct(c, 5, 6, 0.1), ParamError);
  EXPECT_THROW((void)hippo_reconstruct(c, 5, 5, 0.0), ParamError);
  EXPECT_THROW((void)hippo_reconstruct(std::vector<double>{}, 5, 5, 0.1), ParamError);
}

TEST(SsmMixer, PathsAgree) {
  const SsmSystem s = SsmSystem::hippo_legs(8, 0.1);
  const Seq x = gaussian_seq(32, 2, 40);
  EXPECT_LE(max_abs_diff(SsmMixer(s, SsmMixer::Path::kRecurrent).mix(x).values(),
                         SsmMixer(s, SsmMixer::Path::kConvolutional).mix(x).values()),
            1e-9);
}
