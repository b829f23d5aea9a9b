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
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqmix/mixers.hpp"
#include "seqmix/tensor.hpp"

namespace seqmix {

// Continuous LTI system x' = A x + B u, y = C x + D u, applied to every
// channel of a sequence independently with step size dt.
struct SsmSystem {
  RealMat a;                  // N x N
  RealMat b;                  // N x 1
  RealMat c;                  // 1 x N
  double feedthrough = 0.0;   // D
  double dt = 1.0;

  std::size_t order() const noexcept { return a.rows(); }
  void validate() const;

  // HiPPO-LegS transition with C = all ones and D = 0.
  static SsmSystem hippo_legs(std::size_t order, double dt);
};

struct HippoMatrices {
  RealMat a;  // N x N
  RealMat b;  // N x 1
};

// A_nk = -sqrt(2n+1) sqrt(2k+1) (n > k), -(n+1) (n = k), 0 (n < k);
// B_n = sqrt(2n+1).
HippoMatrices hippo_legs_matrices(std::size_t order);

struct DiscreteSystem {
  RealMat a_bar;  // N x N
  RealMat b_bar;  // N x 1
};

// Bilinear (Tustin) transform:
//   A_bar = (I - dt/2 A)^-1 (I + dt/2 A),  B_bar = (I - dt/2 A)^-1 dt B.
DiscreteSystem discretize_bilinear(const SsmSystem &sys);

// Per-channel state columns after `step` tokens have been consumed.
struct SsmState {
  RealMat x;  // N x D
  std::size_t step = 0;
};

struct RecurrentResult {
  Seq output;
  SsmState state;
};

// x_t = A_bar x_{t-1} + B_bar u_t with x_{-1} = 0, y_t = C x_t + D u_t.
RecurrentResult ssm_run_recurrent(const Seq &x, const SsmSystem &sys);
Seq ssm_mix_recurrent(const Seq &x, const SsmSystem &sys);

// Impulse response K_l = C A_bar^l B_bar, l < len, by state propagation.
std::vector<double> ssm_kernel(const SsmSystem &sys, std::size_t len);

// y = K * u + D u per channel (zero initial state), via FFT.
Seq ssm_mix_convolutional(const Seq &x, const SsmSystem &sys);

// Approximate history of a 1-D signal from one state column of a HiPPO-LegS
// system. The time-invariant system stores a Legendre projection of the
// history warped by y = exp(-lag * dt), so lag l is read back as
//   u(t - l) ~= sum_n c_n sqrt(2n+1) P_n(2 exp(-l dt) - 1).
// Returns `window` values, oldest first, ending at `step`.
std::vector<double> hippo_reconstruct(std::span<const double> coeffs, std::size_t step, std::size_t window,
                                      double dt);

class SsmMixer final : public Mixer {
 public:
  enum class Path { kRecurrent, kConvolutional };

  explicit SsmMixer(SsmSystem sys, Path path = Path::kConvolutional) : sys_(std::move(sys)), path_(path) {
    sys_.validate();
  }
  std::string_view name() const override { return "ssm"; }
  // Fixed transition matrices whose output depends on the input history.
  Taxonomy taxonomy() const override { return kFixedDependent; }
  Seq mix(const Seq &x) const override {
    return path_ == Path::kRecurrent ? ssm_mix_recurrent(x, sys_) : ssm_mix_convolutional(x, sys_);
  }

 private:
  SsmSystem sys_;
  Path path_;
};

}  // namespace seqmix
