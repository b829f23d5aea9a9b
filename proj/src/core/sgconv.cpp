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
#include "seqmix/sgconv.hpp"

#include <cmath>
#include <sstream>

#include "seqmix/random.hpp"

namespace seqmix {

std::size_t sgconv_scale_count(std::size_t len, std::size_t sub_kernel) {
  if (sub_kernel == 0) throw ParamError("sgconv: sub-kernel size must be positive");
  if (len < sub_kernel) {
    throw ParamError("sgconv: length " + std::to_string(len) + " below sub-kernel size " +
                     std::to_string(sub_kernel));
  }
  // Smallest e with k 2^e >= L, computed in integers to avoid log2 rounding.
  std::size_t e = 0;
  while ((sub_kernel << e) < len) ++e;
  return e + 1;
}

std::size_t SgconvParams::param_elements() const noexcept {
  std::size_t total = 0;
  for (const auto &w : sub_weights) total += w.size();
  return total;
}

void SgconvParams::validate(std::size_t len) const {
  const std::size_t s = sgconv_scale_count(len, sub_kernel);
  if (scales() != s) {
    throw ParamError("sgconv: " + std::to_string(scales()) + " parameter sets, length " + std::to_string(len) +
                     " needs " + std::to_string(s));
  }
  if (!(decay > 0.0 && decay <= 1.0)) throw ParamError("sgconv: decay must lie in (0, 1]");
  for (const auto &w : sub_weights) {
    if (w.rows() != sub_kernel || w.cols() != dim() || w.cols() == 0) {
      throw ShapeError("sgconv: sub-kernel weights " + w.shape_string() + " expected " +
                       std::to_string(sub_kernel) + "x" + std::to_string(dim()));
    }
  }
}

SgconvParams SgconvParams::random(std::size_t len, std::size_t sub_kernel, std::size_t dim, double decay,
                                  std::uint64_t seed) {
  const std::size_t s = sgconv_scale_count(len, sub_kernel);
  auto engine = make_engine(seed, Stream::kSgconv);
  SgconvParams p{sub_kernel, {}, decay};
  const double scale = 1.0 / std::sqrt(static_cast<double>(sub_kernel));
  for (std::size_t i = 0; i < s; ++i) p.sub_weights.push_back(random_normal(sub_kernel, dim, engine, scale));
  p.validate(len);
  return p;
}

SgconvParams SgconvParams::constant(std::size_t len, std::size_t sub_kernel, std::size_t dim, double decay,
                                    double value) {
  const std::size_t s = sgconv_scale_count(len, sub_kernel);
  SgconvParams p{sub_kernel, std::vector<RealMat>(s, RealMat(sub_kernel, dim, value)), decay};
  p.validate(len);
  return p;
}

RealMat interpolate_rows(const RealMat &w, std::size_t rows) {
  if (w.rows() == 0 || rows == 0) throw ShapeError("interpolate_rows: empty input or target");
  if (rows == w.rows()) return w;
  RealMat out(rows, w.cols());
  const std::size_t src = w.rows();
  for (std::size_t j = 0; j < rows; ++j) {
    if (src == 1) {
      std::copy(w.row(0).begin(), w.row(0).end(), out.row(j).begin());
      continue;
    }
    const double pos = static_cast<double>(j) * static_cast<double>(src - 1) / static_cast<double>(rows - 1);
    const std::size_t lo = std::min(static_cast<std::size_t>(pos), src - 2);
    const double frac = pos - static_cast<double>(lo);
    for (std::size_t c = 0; c < w.cols(); ++c) out(j, c) = (1.0 - frac) * w(lo, c) + frac * w(lo + 1, c);
  }
  return out;
}

SgconvKernel build_kernel(const SgconvParams &p, std::size_t len) {
  p.validate(len);
  const std::size_t dim = p.dim();
  RealMat kernel(len, dim);
  std::size_t offset = 0;
  double weight = 1.0;
  for (std::size_t i = 0; i < p.scales() && offset < len; ++i) {
    const RealMat block = interpolate_rows(p.sub_weights[i], p.sub_kernel << i);
    const std::size_t take = std::min(block.rows(), len - offset);
    for (std::size_t r = 0; r < take; ++r)
      for (std::size_t c = 0; c < dim; ++c) kernel(offset + r, c) = weight * block(r, c);
    offset += take;
    weight *= p.decay;
  }
  MemoryLedger ledger{len, p.scales(), p.param_elements(), kernel.size()};
  return {std::move(kernel), ledger};
}

Seq sgconv_mix(const Seq &x, const SgconvParams &p) {
  if (p.dim() != x.dim()) {
    throw ShapeError("sgconv_mix: parameters for width " + std::to_string(p.dim()) + ", input " +
                     x.values().shape_string());
  }
  const auto built = build_kernel(p, x.len());
  return Seq(causal_convolve_columns(built.kernel, x.values()));
}

std::vector<MemoryAuditRow> memory_audit(std::size_t sub_kernel, std::size_t dim,
                                         const std::vector<std::size_t> &lens) {
  std::vector<MemoryAuditRow> rows;
  for (std::size_t len : lens) {
    const auto params = SgconvParams::constant(len, sub_kernel, dim, 0.5, 1.0);
    const auto ledger = build_kernel(params, len).ledger;
    if (ledger.param_elements != ledger.scales * sub_kernel * dim) {
      throw Error(ErrorCode::kNumeric, "memory_audit: parameter count is not s*k*D at L=" + std::to_string(len));
    }
    if (ledger.kernel_elements != len * dim) {
      throw Error(ErrorCode::kNumeric, "memory_audit: kernel size is not L*D at L=" + std::to_string(len));
    }
    if (!rows.empty() && len == 2 * rows.back().len &&
        ledger.param_elements != rows.back().param_elements + sub_kernel * dim) {
      throw Error(ErrorCode::kNumeric, "memory_audit: parameter growth across L=" + std::to_string(rows.back().len) +
                                           " -> " + std::to_string(len) + " is not k*D");
    }
    rows.push_back({len, ledger.scales, ledger.param_elements, ledger.kernel_elements});
  }
  return rows;
}

std::string memory_audit_csv(const std::vector<MemoryAuditRow> &rows) {
  std::ostringstream out;
  out << "L,s,param_elements,kernel_elements\n";
  for (const auto &r : rows) out << r.len << ',' << r.scales << ',' << r.param_elements << ',' << r.kernel_elements << '\n';
  return out.str();
}

}  // namespace seqmix
