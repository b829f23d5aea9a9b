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
#include <random>

#include "seqmix/tensor.hpp"

namespace seqmix {

// Independent reproducible streams derived from one user seed. Each consumer
// (input data, attention weights, feature maps, ...) draws from its own
// stream so adding a consumer never shifts another consumer's numbers.
enum class Stream : std::uint64_t {
  kInput = 1,
  kConv,
  kAttention,
  kFeatureMap,
  kMlp,
  kSgconv,
  kSelector,
  kVerify,
};

std::mt19937_64 make_engine(std::uint64_t seed, Stream stream, std::uint64_t salt = 0);

// Standard-normal entries, optionally scaled.
RealMat random_normal(std::size_t rows, std::size_t cols, std::mt19937_64 &engine, double scale = 1.0);
RealMat random_normal(std::size_t rows, std::size_t cols, std::uint64_t seed, Stream stream,
                      std::uint64_t salt = 0, double scale = 1.0);

}  // namespace seqmix
