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

#include "oracles.hpp"
#include "seqmix/mixers.hpp"
#include "seqmix/sgconv.hpp"

using namespace seqmix;

TEST(ScaleCount, Formula) {
  EXPECT_EQ(sgconv_scale_count(1024, 16), 7u);
  EXPECT_EQ(sgconv_scale_count(16, 16), 1u);
  EXPECT_EQ(sgconv_scale_count(17, 16), 2u);
  EXPECT_EQ(sgconv_scale_count(100, 16), 4u);  // ceil(log2 6.25) + 1
  EXPECT_THROW((void)sgconv_scale_count(8, 16), ParamError);
  EXPECT_THROW((void)sgconv_scale_count(8, 0), ParamError);
}

TEST(ScaleCount, DoublingAddsOneScale) {
  for (std::size_t L = 16; L < 8192; L *= 2) EXPECT_EQ(sgconv_scale_count(2 * L, 16), sgconv_scale_count(L, 16) + 1);
}

TEST(Interpolate, EndpointsAlignedAndLinearPreserved) {
  const RealMat w(4, 2, {0.0, 5.0, 1.0, 5.0, 2.0, 5.0, 3.0, 5.0});
  const RealMat up = interpolate_rows(w, 13);
  ASSERT_EQ(up.rows(), 13u);
  for (std::size_t j = 0; j < 13; ++j) {
    EXPECT_NEAR(up(j, 0), 3.0 * static_cast<double>(j) / 12.0, 1e-12);
    EXPECT_NEAR(up(j, 1), 5.0, 1e-12);
  }
  EXPECT_EQ(interpolate_rows(w, 4), w);
  EXPECT_EQ(interpolate_rows(RealMat(1, 1, {2.0}), 3), RealMat(3, 1, 2.0));
  EXPECT_THROW((void)interpolate_rows(w, 0), ShapeError);
}

TEST(BuildKernel, SingleScaleIsIdentity) {
  const auto p = SgconvParams::random(16, 16, 3, 0.5, 1);
  ASSERT_EQ(p.scales(), 1u);
  EXPECT_EQ(build_kernel(p, 16).kernel, p.sub_weights[0]);
}

TEST(BuildKernel, ConstantWeightsGiveDecayingBlocks) {
  const auto p = SgconvParams::constant(256, 16, 1, 0.5, 1.0);
  ASSERT_EQ(p.scales(), 5u);
  const RealMat k = build_kernel(p, 256).kernel;
  ASSERT_EQ(k.rows(), 256u);
  // Blocks of 16, 32, 64, 128 rows, then the 256-row block truncated to 16.
  const std::size_t bounds[] = {0, 16, 48, 112, 240, 256};
  double value = 1.0;
  for (std::size_t b = 0; b < 5; ++b) {
    for (std::size_t r = bounds[b]; r < bounds[b + 1]; ++r) EXPECT_NEAR(k(r, 0), value, 1e-12) << "row " << r;
    value *= 0.5;
  }
}

TEST(BuildKernel, LedgerCounts) {
  const auto p = SgconvParams::random(1000, 16, 3, 0.5, 2);
  const auto built = build_kernel(p, 1000);
  EXPECT_EQ(built.kernel.rows(), 1000u);
  EXPECT_EQ(built.ledger.len, 1000u);
  EXPECT_EQ(built.ledger.scales, p.scales());
  EXPECT_EQ(built.ledger.param_elements, p.scales() * 16 * 3);
  EXPECT_EQ(built.ledger.kernel_elements, 1000u * 3);
}

TEST(BuildKernel, DecayMonotoneAcrossBlocks) {
  const RealMat w = [] {
    RealMat m = oracle::gaussian(8, 2, 3);
    for (double &v : m.data()) v = std::fabs(v) + 0.1;
    return m;
  }();
  SgconvParams p{8, std::vector<RealMat>(sgconv_scale_count(512, 8), w), 0.7};
  const RealMat k = build_kernel(p, 512).kernel;
  double prev = INFINITY;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < p.scales(); ++i) {
    const std::size_t rows = std::min<std::size_t>(8u << i, 512 - offset);
    double mean = 0.0;
    for (std::size_t r = offset; r < offset + rows; ++r)
      for (std::size_t c = 0; c < 2; ++c) mean += std::fabs(k(r, c));
    mean /= static_cast<double>(rows * 2);
    EXPECT_LE(mean, prev + 1e-12) << "block " << i;
    prev = mean;
    offset += rows;
  }
}

TEST(SgconvMix, DeltaKernelIsIdentity) {
  const std::size_t L = 64, k = 8, D = 3;
  SgconvParams p{k, std::vector<RealMat>(sgconv_scale_count(L, k), RealMat(k, D)), 0.5};
  for (std::size_t c = 0; c < D; ++c) p.sub_weights[0](0, c) = 1.0;
  const Seq x(oracle::gaussian(L, D, 4));
  EXPECT_LE(max_abs_diff(sgconv_mix(x, p).values(), x.values()), 1e-12);
}

TEST(SgconvMix, MatchesDirectCausalConvolution) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto p = SgconvParams::random(128, 16, 4, 0.5, seed);
    const Seq x(oracle::gaussian(128, 4, seed + 10));
    const RealMat kernel = build_kernel(p, 128).kernel;
    EXPECT_LE(max_abs_diff(sgconv_mix(x, p).values(), oracle::causal_convolve_columns(kernel, x.values())), 1e-8);
  }
}

TEST(SgconvMix, SingleChannelAgreesWithConvMix) {
  const auto p = SgconvParams::random(64, 8, 1, 0.5, 5);
  const Seq x(oracle::gaussian(64, 1, 6));
  const RealMat kernel = build_kernel(p, 64).kernel;
  const ConvParams c{{kernel.data().begin(), kernel.data().end()}};
  EXPECT_LE(max_abs_diff(sgconv_mix(x, p).values(), conv_mix(x, c).values()), 1e-8);
}

TEST(SgconvParams, Validation) {
  auto p = SgconvParams::random(64, 8, 2, 0.5, 7);
  EXPECT_THROW(p.validate(128), ParamError);  // one scale short
  EXPECT_THROW((void)sgconv_mix(Seq(oracle::gaussian(64, 3, 1)), p), ShapeError);
  auto bad_decay = p;
  bad_decay.decay = 0.0;
  EXPECT_THROW(bad_decay.validate(64), ParamError);
  bad_decay.decay = 1.5;
  EXPECT_THROW(bad_decay.validate(64), ParamError);
  auto bad_shape = p;
  bad_shape.sub_weights[1] = RealMat(7, 2);
  EXPECT_THROW(bad_shape.validate(64), ShapeError);
  EXPECT_EQ(p.param_elements(), p.scales() * 8 * 2);
  EXPECT_THROW((void)SgconvParams::random(4, 8, 2, 0.5, 7), ParamError);
}

TEST(MemoryAudit, FormulaArithmetic) {
  const auto rows = memory_audit(16, 1, {1024, 2048});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].scales, 7u);
  EXPECT_EQ(rows[0].param_elements, 112u);
  EXPECT_EQ(rows[1].scales, 8u);
  EXPECT_EQ(rows[1].param_elements, 128u);
  EXPECT_EQ(rows[1].param_elements - rows[0].param_elements, 16u);
}

TEST(MemoryAudit, SweepAccounting) {
  std::vector<std::size_t> lens;
  for (std::size_t L = 64; L <= 8192; L *= 2) lens.push_back(L);
  for (std::size_t D : {1u, 4u}) {
    const auto rows = memory_audit(16, D, lens);
    double prev_ratio = INFINITY;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i].kernel_elements, rows[i].len * D);
      EXPECT_EQ(rows[i].param_elements, rows[i].scales * 16 * D);
      EXPECT_EQ(rows[i].scales, sgconv_scale_count(rows[i].len, 16));
      if (i > 0) {
        EXPECT_EQ(rows[i].param_elements - rows[i - 1].param_elements, 16 * D);
      }
      const double ratio = static_cast<double>(rows[i].param_elements) / static_cast<double>(rows[i].kernel_elements);
      EXPECT_LT(ratio, prev_ratio);
      prev_ratio = ratio;
    }
  }
  EXPECT_THROW((void)memory_audit(16, 1, {8}), ParamError);
}

TEST(MemoryAudit, Csv) {
  const std::string csv = memory_audit_csv(memory_audit(16, 1, {64, 128}));
  EXPECT_EQ(csv, "L,s,param_elements,kernel_elements\n64,3,48,64\n128,4,64,128\n");
}

TEST(SgconvMixer, Adapter) {
  const auto p = SgconvParams::random(32, 8, 2, 0.5, 8);
  const SgconvMixer m(p);
  const Seq x(oracle::gaussian(32, 2, 9));
  EXPECT_EQ(m.mix(x).values(), sgconv_mix(x, p).values());
  EXPECT_EQ(m.taxonomy(), kLearnedIndependent);
  EXPECT_EQ(m.name(), "sgconv");
}
