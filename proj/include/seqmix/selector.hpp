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

namespace seqmix {

// Threshold token selector X (L x D) -> X' (L' x D).
struct SelectorConfig {
  enum class Scorer { kL2Norm, kProjection };

  double tau = 0.0;
  Scorer scorer = Scorer::kL2Norm;
  std::uint64_t seed = 0;  // draws psi (D x 1) for the projection scorer

  // Parses "tau=<v>,scorer=<l2_norm|projection>[,seed=<n>]".
  static SelectorConfig parse(const std::string &spec);
};

struct Selection {
  Seq tokens;
  std::vector<std::size_t> kept;  // strictly increasing source indices
};

// Per-token scores: the row L2 norm, or |x_t . psi|.
std::vector<double> selector_scores(const Seq &x, const SelectorConfig &cfg);

// Keeps tokens scoring >= tau in their original order. When none passes, the
// single highest-scoring token (first on ties) is kept.
Selection select_tokens(const Seq &x, const SelectorConfig &cfg);

}  // namespace seqmix
