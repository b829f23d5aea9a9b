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

#include <limits>

#include "oracles.hpp"
#include "seqmix/random.hpp"
#include "seqmix/selector.hpp"

using namespace seqmix;

namespace {

SelectorConfig l2(double tau) { return {tau, SelectorConfig::Scorer::kL2Norm, 0}; }

}  // namespace

TEST(Selector, NegativeInfinityKeepsEverything) {
  const Seq x(oracle::gaussian(9, 3, 1));
  const auto s = select_tokens(x, l2(-std::numeric_limits<double>::infinity()));
  EXPECT_EQ(s.tokens.values(), x.values());
  EXPECT_EQ(s.kept.size(), 9u);
}

TEST(Selector, PositiveInfinityKeepsTheArgmax) {
  RealMat v(4, 1, {1.0, -5.0, 3.0, 5.0});
  const auto s = select_tokens(Seq(v), l2(std::numeric_limits<double>::infinity()));
  // |-5| and |5| tie; the first one wins.
  EXPECT_EQ(s.kept, (std::vector<std::size_t>{1}));
  EXPECT_EQ(s.tokens.values(), RealMat(1, 1, {-5.0}));
}

TEST(Selector, NormThresholdExample) {
  // Row norms 3, 1, 2.
  const RealMat v(3, 2, {3.0, 0.0, 0.0, 1.0, 0.0, 2.0});
  const auto s = select_tokens(Seq(v), l2(1.5));
  EXPECT_EQ(s.kept, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.tokens.values(), RealMat(2, 2, {3.0, 0.0, 0.0, 2.0}));
  EXPECT_EQ(selector_scores(Seq(v), l2(0)), (std::vector<double>{3.0, 1.0, 2.0}));
}

TEST(Selector, ProjectionScorerUsesSeededPsi) {
  const Seq x(oracle::gaussian(6, 4, 2));
  const SelectorConfig cfg{0.0, SelectorConfig::Scorer::kProjection, 7};
  const RealMat psi = random_normal(4, 1, 7, Stream::kSelector, 4);
  const RealMat proj = oracle::matmul(x.values(), psi);
  const auto scores = selector_scores(x, cfg);
  for (std::size_t t = 0; t < 6; ++t) EXPECT_NEAR(scores[t], std::fabs(proj(t, 0)), 1e-14);
  EXPECT_EQ(scores, selector_scores(x, cfg));
  EXPECT_NE(scores, selector_scores(x, {0.0, SelectorConfig::Scorer::kProjection, 8}));
}

TEST(Selector, MonotoneInThreshold) {
  const Seq x(oracle::gaussian(200, 4, 3));
  for (auto scorer : {SelectorConfig::Scorer::kL2Norm, SelectorConfig::Scorer::kProjection}) {
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double tau = 0.0; tau <= 5.0; tau += 0.25) {
      const auto s = select_tokens(x, {tau, scorer, 1});
      EXPECT_LE(s.kept.size(), prev);
      prev = s.kept.size();
    }
  }
}

TEST(Selector, OrderPreservedAndIdempotent) {
  const Seq x(oracle::gaussian(100, 5, 4));
  for (auto scorer : {SelectorConfig::Scorer::kL2Norm, SelectorConfig::Scorer::kProjection}) {
    for (double tau : {0.5, 2.0, 3.5, 100.0}) {
      const SelectorConfig cfg{tau, scorer, 3};
      const auto once = select_tokens(x, cfg);
      ASSERT_FALSE(once.kept.empty());
      for (std::size_t i = 1; i < once.kept.size(); ++i) EXPECT_LT(once.kept[i - 1], once.kept[i]);
      const auto twice = select_tokens(once.tokens, cfg);
      EXPECT_EQ(twice.tokens.values(), once.tokens.values());
      EXPECT_EQ(twice.kept.size(), once.kept.size());
    }
  }
}

TEST(SelectorConfig, Parse) {
  const auto a = SelectorConfig::parse("tau=1.5,scorer=projection,seed=9");
  EXPECT_DOUBLE_EQ(a.tau, 1.5);
  EXPECT_EQ(a.scorer, SelectorConfig::Scorer::kProjection);
  EXPECT_EQ(a.seed, 9u);
  const auto b = SelectorConfig::parse("tau=-inf");
  EXPECT_EQ(b.scorer, SelectorConfig::Scorer::kL2Norm);
  EXPECT_TRUE(std::isinf(b.tau));
  for (const char *bad : {"", "scorer=l2_norm", "tau=abc", "tau=1,scorer=max", "tau=1,foo=2", "tau", "tau=nan",
                          "tau=1,seed=-x"}) {
    EXPECT_THROW((void)SelectorConfig::parse(bad), UsageError) << bad;
  }
}
