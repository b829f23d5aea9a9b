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
#include "seqmix/dist_attn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <thread>

#include "seqmix/random.hpp"

namespace seqmix {

ShardLayout plan_layout(std::size_t len, std::size_t heads, std::size_t workers) {
  if (workers < 1) throw LayoutError("plan_layout: need at least one worker");
  if (heads < 1 || heads % workers != 0) {
    throw LayoutError("plan_layout: " + std::to_string(heads) + " heads cannot be split evenly over " +
                      std::to_string(workers) + " workers");
  }
  if (len < workers) {
    throw LayoutError("plan_layout: " + std::to_string(len) + " tokens cannot fill " + std::to_string(workers) +
                      " partitions");
  }
  ShardLayout layout{workers, len, heads, {0}, {}};
  const std::size_t base = len / workers, extra = len % workers;
  for (std::size_t w = 0; w < workers; ++w) {
    layout.seq_bounds.push_back(layout.seq_bounds.back() + base + (w < extra ? 1 : 0));
  }
  const std::size_t per = heads / workers;
  for (std::size_t w = 0; w < workers; ++w) layout.head_ranges.push_back({w * per, (w + 1) * per});
  return layout;
}

const char *to_string(ShuffleTag tag) noexcept {
  return tag == ShuffleTag::kToHeads ? "to_heads" : "to_sequence";
}

const char *to_string(ShardTensor tensor) noexcept {
  switch (tensor) {
    case ShardTensor::kQuery: return "query";
    case ShardTensor::kKey: return "key";
    case ShardTensor::kValue: return "value";
    case ShardTensor::kContext: return "context";
  }
  return "?";
}

std::string ShuffleMessage::describe() const {
  std::ostringstream out;
  out << to_string(tag) << ' ' << to_string(tensor) << " block " << src << "->" << dst << " heads ["
      << head_range.begin << ',' << head_range.end << ") tokens [" << token_range.begin << ','
      << token_range.end << ')';
  return out.str();
}

namespace {

auto delivery_key(const ShuffleMessage &m) {
  return std::make_tuple(m.src, m.head_range, m.token_range, static_cast<int>(m.tensor));
}

void check_tiling(const std::vector<ShuffleMessage> &messages, const TileExtent &extent) {
  // coverage[tensor][token * heads + head] = index of covering message + 1
  std::vector<std::vector<std::size_t>> coverage;
  std::vector<ShardTensor> tensors;
  for (const auto &m : messages) {
    if (std::find(tensors.begin(), tensors.end(), m.tensor) == tensors.end()) tensors.push_back(m.tensor);
  }
  for (ShardTensor tensor : tensors) {
    std::vector<std::size_t> cells(extent.tokens * extent.heads, 0);
    for (std::size_t i = 0; i < messages.size(); ++i) {
      const auto &m = messages[i];
      if (m.tensor != tensor) continue;
      if (m.token_range.end > extent.tokens || m.head_range.end > extent.heads) {
        throw ProtocolError("shuffle: " + m.describe() + " lies outside the " + std::to_string(extent.tokens) +
                            "x" + std::to_string(extent.heads) + " (token, head) extent");
      }
      for (std::size_t t = m.token_range.begin; t < m.token_range.end; ++t) {
        for (std::size_t h = m.head_range.begin; h < m.head_range.end; ++h) {
          std::size_t &cell = cells[t * extent.heads + h];
          if (cell != 0) {
            throw ProtocolError("shuffle: duplicated cell (token " + std::to_string(t) + ", head " +
                                std::to_string(h) + ") in " + m.describe() + " and " +
                                messages[cell - 1].describe());
          }
          cell = i + 1;
        }
      }
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == 0) {
        throw ProtocolError(std::string("shuffle: missing ") + to_string(tensor) + " block at (token " +
                            std::to_string(c / extent.heads) + ", head " + std::to_string(c % extent.heads) + ")");
      }
    }
  }
}

}  // namespace

ExchangeResult all_to_all(std::vector<ShuffleMessage> messages, std::size_t workers,
                          std::optional<TileExtent> tiling) {
  for (const auto &m : messages) {
    if (m.src >= workers || m.dst >= workers) {
      throw ProtocolError("shuffle: " + m.describe() + " addresses a worker outside [0, " +
                          std::to_string(workers) + ")");
    }
    const std::size_t nh = m.head_range.size();
    if (m.payload.rows() != m.token_range.size() || nh == 0 || m.payload.cols() % nh != 0) {
      throw ProtocolError("shuffle: payload " + m.payload.shape_string() + " does not match " + m.describe());
    }
  }
  for (std::size_t i = 0; i < messages.size(); ++i) {
    for (std::size_t j = i + 1; j < messages.size(); ++j) {
      const auto &a = messages[i], &b = messages[j];
      if (a.tag == b.tag && a.tensor == b.tensor && a.head_range.overlaps(b.head_range) &&
          a.token_range.overlaps(b.token_range)) {
        throw ProtocolError("shuffle: overlapping coordinates in " + a.describe() + " and " + b.describe());
      }
    }
  }
  if (tiling) check_tiling(messages, *tiling);

  ExchangeResult result;
  result.inbox.resize(workers);
  result.bytes_sent.assign(workers, 0);
  for (auto &m : messages) {
    result.elements += m.payload.size();
    if (m.src != m.dst) result.bytes_sent[m.src] += m.payload.size() * sizeof(double);
    result.inbox[m.dst].push_back(std::move(m));
  }
  for (auto &box : result.inbox) {
    std::sort(box.begin(), box.end(),
              [](const ShuffleMessage &a, const ShuffleMessage &b) { return delivery_key(a) < delivery_key(b); });
  }
  return result;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs one barrier-synchronized stage on every worker. Errors are rethrown
// after all workers finished, lowest worker id first.
template <typename Fn>
void run_stage(std::size_t workers, Execution execution, std::vector<double> &times, Fn &&fn) {
  std::vector<std::exception_ptr> errors(workers);
  auto body = [&](std::size_t w) {
    const auto start = Clock::now();
    try {
      fn(w);
    } catch (...) {
      errors[w] = std::current_exception();
    }
    times[w] += elapsed_ms(start);
  };
  if (execution == Execution::kThreaded && workers > 1) {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
    for (auto &t : threads) t.join();
  } else {
    for (std::size_t w = 0; w < workers; ++w) body(w);
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Places each received block into a tokens x (heads * d_h) buffer.
RealMat assemble(const std::vector<ShuffleMessage> &inbox, ShardTensor tensor, Range tokens, Range heads,
                 std::size_t dh) {
  RealMat out(tokens.size(), heads.size() * dh);
  for (const auto &m : inbox) {
    if (m.tensor != tensor) continue;
    const std::size_t col0 = (m.head_range.begin - heads.begin) * dh;
    for (std::size_t r = 0; r < m.payload.rows(); ++r) {
      auto src = m.payload.row(r);
      std::copy(src.begin(), src.end(), out.row(m.token_range.begin - tokens.begin + r).begin() +
                                            static_cast<std::ptrdiff_t>(col0));
    }
  }
  return out;
}

}  // namespace

DistResult distributed_attention(const Seq &x, const AttnParams &p, const ShardLayout &layout,
                                 const DistOptions &options) {
  p.validate(x.dim());
  if (layout.len != x.len() || layout.heads != p.heads) {
    throw LayoutError("distributed_attention: layout planned for L=" + std::to_string(layout.len) +
                      ", H=" + std::to_string(layout.heads) + " used with L=" + std::to_string(x.len()) +
                      ", H=" + std::to_string(p.heads));
  }
  const std::size_t nw = layout.workers, len = x.len(), dh = p.head_dim();
  const Range all_tokens{0, len};
  std::vector<double> times(nw, 0.0);
  std::vector<WorkerStats> stats(nw);
  for (std::size_t w = 0; w < nw; ++w) stats[w].worker = w;

  // Stage A: projections of the local token partition, all heads.
  std::vector<std::vector<ShuffleMessage>> outbox(nw);
  run_stage(nw, options.execution, times, [&](std::size_t w) {
    const Range tokens = layout.tokens(w);
    const RealMat local = slice_rows(x.values(), tokens.begin, tokens.end);
    const std::pair<ShardTensor, const RealMat *> projections[] = {
        {ShardTensor::kQuery, &p.w_query}, {ShardTensor::kKey, &p.w_key}, {ShardTensor::kValue, &p.w_value}};
    for (const auto &[tensor, weight] : projections) {
      const RealMat proj = matmul(local, *weight);
      for (std::size_t dst = 0; dst < nw; ++dst) {
        const Range heads = layout.heads_of(dst);
        outbox[w].push_back({w, dst, ShuffleTag::kToHeads, tensor, heads, tokens,
                             slice_cols(proj, heads.begin * dh, heads.end * dh)});
      }
    }
  });

  auto flatten = [&] {
    std::vector<ShuffleMessage> all;
    for (auto &box : outbox) {
      std::move(box.begin(), box.end(), std::back_inserter(all));
      box.clear();
    }
    return all;
  };
  auto first = all_to_all(flatten(), nw, TileExtent{len, p.heads});

  // Stage B: full-length attention for the owned heads. The score buffer for
  // all owned heads is live at once.
  run_stage(nw, options.execution, times, [&](std::size_t w) {
    if (options.fail_worker && *options.fail_worker == w) {
      throw ProtocolError("worker " + std::to_string(w) + " failed in the head-parallel stage; round aborted");
    }
    const Range heads = layout.heads_of(w);
    const auto &inbox = first.inbox[w];
    const RealMat q = assemble(inbox, ShardTensor::kQuery, all_tokens, heads, dh);
    const RealMat k = assemble(inbox, ShardTensor::kKey, all_tokens, heads, dh);
    const RealMat v = assemble(inbox, ShardTensor::kValue, all_tokens, heads, dh);

    std::vector<double> scores(heads.size() * len * len);
    stats[w].peak_score_elements = scores.size();
    RealMat context(len, heads.size() * dh);
    std::vector<double> out(dh);
    for (std::size_t local = 0; local < heads.size(); ++local) {
      const RealMat qh = detail::head_columns(q, local, dh);
      const RealMat kt = detail::head_columns(k, local, dh).transposed();
      const RealMat vh = detail::head_columns(v, local, dh);
      for (std::size_t t = 0; t < len; ++t) {
        std::span<double> row(scores.data() + (local * len + t) * len, len);
        detail::attend_row(qh.row(t), kt, vh, true, row, out, t, heads.begin + local);
        std::copy(out.begin(), out.end(), context.row(t).begin() + static_cast<std::ptrdiff_t>(local * dh));
      }
    }
    for (std::size_t dst = 0; dst < nw; ++dst) {
      const Range tokens = layout.tokens(dst);
      outbox[w].push_back({w, dst, ShuffleTag::kToSequence, ShardTensor::kContext, heads, tokens,
                           slice_rows(context, tokens.begin, tokens.end)});
    }
  });

  auto second = all_to_all(flatten(), nw, TileExtent{len, p.heads});

  // Stage C: concatenate heads for the local tokens, replicated W_O.
  RealMat output(len, p.out_dim());
  run_stage(nw, options.execution, times, [&](std::size_t w) {
    const Range tokens = layout.tokens(w);
    RealMat concat = assemble(second.inbox[w], ShardTensor::kContext, tokens, Range{0, p.heads}, dh);
    const RealMat local = p.w_out ? matmul(concat, *p.w_out) : std::move(concat);
    for (std::size_t r = 0; r < local.rows(); ++r) {
      std::copy(local.row(r).begin(), local.row(r).end(), output.row(tokens.begin + r).begin());
    }
  });

  for (std::size_t w = 0; w < nw; ++w) {
    stats[w].bytes_sent = first.bytes_sent[w] + second.bytes_sent[w];
    stats[w].wall_ms = times[w];
  }
  return {Seq(std::move(output)), std::move(stats), first.elements, second.elements};
}

DistResult reference_attention(const Seq &x, const AttnParams &p) {
  return distributed_attention(x, p, plan_layout(x.len(), p.heads, 1), {Execution::kSequential, std::nullopt});
}

std::size_t max_feasible_length(std::size_t budget, std::size_t heads, std::size_t workers) {
  if (heads == 0 || workers == 0 || heads % workers != 0) {
    throw LayoutError("max_feasible_length: heads must split evenly over workers");
  }
  const std::size_t per_worker = heads / workers;
  // per_worker * l^2 <= budget  <=>  l^2 <= floor(budget / per_worker)
  const std::size_t cap = budget / per_worker;
  auto fits = [&](std::size_t l) { return l <= UINT32_MAX && l * l <= cap; };
  std::size_t l = static_cast<std::size_t>(std::sqrt(static_cast<double>(budget) / static_cast<double>(per_worker)));
  while (l > 0 && !fits(l)) --l;
  while (fits(l + 1)) ++l;
  return l;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<BenchRecord> scaling_bench(const ScalingBenchConfig &config) {
  if (config.repeats == 0) throw ParamError("scaling_bench: repeats must be positive");
  if (config.dim % config.heads != 0) {
    throw ParamError("scaling_bench: width " + std::to_string(config.dim) + " not divisible by " +
                     std::to_string(config.heads) + " heads");
  }
  const auto params = AttnParams::random(config.dim, config.heads, config.dim / config.heads, true, config.seed);
  const std::size_t ref_max = max_feasible_length(config.budget, config.heads, 1);
  const std::size_t dist_max = max_feasible_length(config.budget, config.heads, config.workers);

  std::vector<BenchRecord> records;
  for (std::size_t len : config.lens) {
    const Seq x(random_normal(len, config.dim, config.seed, Stream::kInput, len));
    auto measure = [&](const char *op, std::size_t workers, std::size_t feasible) {
      if (len > feasible) return;
      const auto layout = plan_layout(len, config.heads, workers);
      std::vector<double> times;
      DistResult last{Seq(RealMat(1, 1)), {}, 0, 0};
      for (std::size_t r = 0; r < config.repeats; ++r) {
        const auto start = Clock::now();
        last = distributed_attention(x, params, layout, {config.execution, std::nullopt});
        times.push_back(elapsed_ms(start));
      }
      BenchRecord rec{op, workers, len, config.dim, config.heads, median(times), 0, 0, feasible};
      for (const auto &s : last.stats) {
        rec.peak_score_elems = std::max(rec.peak_score_elems, s.peak_score_elements);
        rec.bytes_shuffled += s.bytes_sent;
      }
      records.push_back(std::move(rec));
    };
    measure("attn-ref", 1, ref_max);
    measure("dist-attn", config.workers, dist_max);
  }
  return records;
}

std::string bench_csv(const std::vector<BenchRecord> &records) {
  std::ostringstream out;
  out << "op,workers,L,D,H,wall_ms,peak_score_elems,bytes_shuffled,max_feasible\n";
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto &r : records) {
    out << r.op << ',' << r.workers << ',' << r.len << ',' << r.dim << ',' << r.heads << ',' << r.wall_ms << ','
        << r.peak_score_elems << ',' << r.bytes_shuffled << ',' << r.max_feasible << '\n';
  }
  return out.str();
}

}  // namespace seqmix
