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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqmix/mixers.hpp"
#include "seqmix/tensor.hpp"

namespace seqmix {

struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool overlaps(const Range &o) const noexcept { return begin < o.end && o.begin < end; }
  bool operator==(const Range &) const = default;
  auto operator<=>(const Range &) const = default;
};

// Token partition and head assignment for a group of simulated workers.
// Attention weights (W_Q, W_K, W_V, W_O) are replicated on every worker.
struct ShardLayout {
  std::size_t workers = 0;
  std::size_t len = 0;
  std::size_t heads = 0;
  std::vector<std::size_t> seq_bounds;  // workers + 1 cut points over [0, len]
  std::vector<Range> head_ranges;       // contiguous, H / workers heads each

  Range tokens(std::size_t worker) const { return {seq_bounds.at(worker), seq_bounds.at(worker + 1)}; }
  Range heads_of(std::size_t worker) const { return head_ranges.at(worker); }
};

// Equal-as-possible token partition (sizes differ by at most one, larger
// parts first) and contiguous head ranges. Throws LayoutError when
// heads % workers != 0 or there are fewer tokens than workers.
ShardLayout plan_layout(std::size_t len, std::size_t heads, std::size_t workers);

enum class ShuffleTag { kToHeads, kToSequence };
enum class ShardTensor { kQuery, kKey, kValue, kContext };

const char *to_string(ShuffleTag tag) noexcept;
const char *to_string(ShardTensor tensor) noexcept;

// One block of a (token x head) tiled tensor in flight between workers. The
// payload has token_range.size() rows and head_range.size() * d_h columns.
struct ShuffleMessage {
  std::size_t src = 0;
  std::size_t dst = 0;
  ShuffleTag tag = ShuffleTag::kToHeads;
  ShardTensor tensor = ShardTensor::kQuery;
  Range head_range;
  Range token_range;
  RealMat payload;

  std::string describe() const;
};

// Full (token, head) extent a shuffle must tile exactly once per tensor.
struct TileExtent {
  std::size_t tokens = 0;
  std::size_t heads = 0;
};

struct ExchangeResult {
  // inbox[w]: messages delivered to w, sorted by (src, head range, token
  // range, tensor).
  std::vector<std::vector<ShuffleMessage>> inbox;
  std::vector<std::size_t> bytes_sent;  // per source worker, remote messages only
  std::size_t elements = 0;             // all payload elements, including self-delivery
};

// In-process all-to-all exchange. Every message is delivered exactly once.
// Throws ProtocolError on out-of-range workers, malformed payloads,
// overlapping coordinates, or (when `tiling` is given) a missing or
// duplicated (token, head) cell, naming the offending block.
ExchangeResult all_to_all(std::vector<ShuffleMessage> messages, std::size_t workers,
                          std::optional<TileExtent> tiling = std::nullopt);

enum class Execution { kSequential, kThreaded };

struct DistOptions {
  Execution execution = Execution::kThreaded;
  // Test hook: this worker fails in the head-parallel stage.
  std::optional<std::size_t> fail_worker;
};

struct WorkerStats {
  std::size_t worker = 0;
  std::size_t peak_score_elements = 0;
  std::size_t bytes_sent = 0;
  double wall_ms = 0.0;
};

struct DistResult {
  Seq output;
  std::vector<WorkerStats> stats;
  std::size_t shuffle1_elements = 0;  // Q, K, V: 3 L H d_h
  std::size_t shuffle2_elements = 0;  // per-head context: L H d_h
};

// Sequence-parallel projections, all-to-all to head-parallel full softmax
// attention, all-to-all back, replicated output projection. The result is
// bit-identical to attention_mix(x, p, true) for every layout.
DistResult distributed_attention(const Seq &x, const AttnParams &p, const ShardLayout &layout,
                                 const DistOptions &options = {});

// Single-device multi-head reference that materializes all H score matrices
// (the one-worker layout).
DistResult reference_attention(const Seq &x, const AttnParams &p);

// Largest L with (H / workers) L^2 <= budget.
std::size_t max_feasible_length(std::size_t budget, std::size_t heads, std::size_t workers);

struct BenchRecord {
  std::string op;
  std::size_t workers = 1;
  std::size_t len = 0;
  std::size_t dim = 0;
  std::size_t heads = 0;
  double wall_ms = 0.0;
  std::size_t peak_score_elems = 0;
  std::size_t bytes_shuffled = 0;
  std::size_t max_feasible = 0;
};

struct ScalingBenchConfig {
  std::vector<std::size_t> lens;
  std::size_t dim = 64;
  std::size_t heads = 8;
  std::size_t workers = 4;
  std::size_t repeats = 3;
  std::size_t budget = std::size_t{1} << 24;  // score elements per worker
  std::uint64_t seed = 0;
  Execution execution = Execution::kThreaded;
};

// Runs the single-device reference ("attn-ref") while H L^2 fits the
// budget and the distributed path ("dist-attn") while (H / N_w) L^2 fits.
// Lengths over budget are skipped; the max_feasible column records the
// largest admissible length. wall_ms is the median over repeats.
std::vector<BenchRecord> scaling_bench(const ScalingBenchConfig &config);

// Header `op,workers,L,D,H,wall_ms,peak_score_elems,bytes_shuffled,max_feasible`.
std::string bench_csv(const std::vector<BenchRecord> &records);

class DistAttentionMixer final : public Mixer {
 public:
  DistAttentionMixer(AttnParams p, std::size_t workers, DistOptions options = {})
      : p_(std::move(p)), workers_(workers), options_(options) {}
  std::string_view name() const override { return "dist-attn"; }
  Taxonomy taxonomy() const override { return kLearnedDependent; }
  Seq mix(const Seq &x) const override {
    return distributed_attention(x, p_, plan_layout(x.len(), p_.heads, workers_), options_).output;
  }

 private:
  AttnParams p_;
  std::size_t workers_;
  DistOptions options_;
};

}  // namespace seqmix
