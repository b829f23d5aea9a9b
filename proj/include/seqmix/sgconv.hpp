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

#include <cstdint>
#include <string>
#include <vector>

#include "seqmix/mixers.hpp"
#include "seqmix/tensor.hpp"

namespace seqmix {

// Number of sub-kernels for a length-L sequence: ceil(log2(L / k)) + 1.
std::size_t sgconv_scale_count(std::size_t len, std::size_t sub_kernel);

// Multi-scale global convolution parameters: s sets of k x D weights bound to
// one sequence length.
struct SgconvParams {
  std::size_t sub_kernel = 0;         // k
  std::vector<RealMat> sub_weights;   // s matrices, each k x D
  double decay = 0.5;                 // alpha in (0, 1]

  std::size_t scales() const noexcept { return sub_weights.size(); }
  std::size_t dim() const noexcept { return sub_weights.empty() ? 0 : sub_weights.front().cols(); }
  std::size_t param_elements() const noexcept;

  // Throws unless the parameter set is consistent and sized for `len`.
  void validate(std::size_t len) const;

  static SgconvParams random(std::size_t len, std::size_t sub_kernel, std::size_t dim, double decay,
                             std::uint64_t seed);
  static SgconvParams constant(std::size_t len, std::size_t sub_kernel, std::size_t dim, double decay,
                               double value);
};

struct MemoryLedger {
  std::size_t len = 0;
  std::size_t scales = 0;
  std::size_t param_elements = 0;   // persistent s * k * D
  std::size_t kernel_elements = 0;  // transient L * D, rebuilt every forward pass
};

struct SgconvKernel {
  RealMat kernel;  // L x D
  MemoryLedger ledger;
};

// Linearly resamples the rows of `w` (endpoints aligned) to `rows` rows.
RealMat interpolate_rows(const RealMat &w, std::size_t rows);

// Sub-kernel i (1-based) is interpolated to k 2^(i-1) rows and scaled by
// alpha^(i-1); the concatenation is truncated or zero-padded to L rows.
SgconvKernel build_kernel(const SgconvParams &p, std::size_t len);

// Per-channel causal FFT convolution with the freshly built kernel.
Seq sgconv_mix(const Seq &x, const SgconvParams &p);

struct MemoryAuditRow {
  std::size_t len = 0;
  std::size_t scales = 0;
  std::size_t param_elements = 0;
  std::size_t kernel_elements = 0;
};

// Ledger for each length in the sweep. Throws ParamError if a length is below
// k, and Error if parameter growth per doubling differs from k * D or the
// kernel size differs from L * D.
std::vector<MemoryAuditRow> memory_audit(std::size_t sub_kernel, std::size_t dim,
                                         const std::vector<std::size_t> &lens);

// CSV with header `L,s,param_elements,kernel_elements`.
std::string memory_audit_csv(const std::vector<MemoryAuditRow> &rows);

class SgconvMixer final : public Mixer {
 public:
  explicit SgconvMixer(SgconvParams p) : p_(std::move(p)) {}
  std::string_view name() const override { return "sgconv"; }
  Taxonomy taxonomy() const override { return kLearnedIndependent; }
  Seq mix(const Seq &x) const override { return sgconv_mix(x, p_); }

 private:
  SgconvParams p_;
};

}  // namespace seqmix
