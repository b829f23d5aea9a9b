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
#include "seqmix/random.hpp"

namespace seqmix {

std::mt19937_64 make_engine(std::uint64_t seed, Stream stream, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(salt),
                    static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

RealMat random_normal(std::size_t rows, std::size_t cols, std::mt19937_64 &engine, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  RealMat m(rows, cols);
  for (double &v : m.data()) v = scale * dist(engine);
  return m;
}

RealMat random_normal(std::size_t rows, std::size_t cols, std::uint64_t seed, Stream stream,
                      std::uint64_t salt, double scale) {
  auto engine = make_engine(seed, stream, salt);
  return random_normal(rows, cols, engine, scale);
}

}  // namespace seqmix
