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
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqmix/dist_attn.hpp"
#include "seqmix/mixers.hpp"
#include "seqmix/selector.hpp"

namespace seqmix {

// ---------------------------------------------------------------------------
// Matrix text files: first line "rows cols", then rows of whitespace
// separated decimals. Values are written with 17 significant digits so a
// save/load round trip is exact.

RealMat read_matrix(std::istream &in);
RealMat load_matrix(const std::string &path);
void write_matrix(std::ostream &out, const RealMat &m);
void save_matrix(const std::string &path, const RealMat &m);

// ---------------------------------------------------------------------------
// Run configuration and mixer construction

inline constexpr std::string_view kMixerOps[] = {"conv", "attn",   "kernel-attn", "mlp",
                                                 "fnet", "ssm",    "sgconv",      "dist-attn"};

bool is_mixer_op(std::string_view op) noexcept;
std::string mixer_op_list();

struct RunConfig {
  std::string op;
  std::size_t len = 64;
  std::size_t dim = 16;
  std::size_t heads = 2;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::vector<double> kernel;             // conv weights; empty draws a random window of 4
  std::optional<SelectorConfig> selector;
  std::size_t budget = std::size_t{1} << 24;
  std::size_t state_order = 16;           // ssm N
  double dt = 0.05;                       // ssm step
  std::size_t sub_kernel = 16;            // sgconv k
  double decay = 0.5;                     // sgconv alpha
};

// Seeded standard-normal len x dim input.
Seq generate_input(const RunConfig &cfg);

// Attention weights (with output projection) used by attn and dist-attn.
// Throws ParamError unless `dim` splits evenly into cfg.heads heads.
AttnParams attention_params(const RunConfig &cfg, std::size_t dim);

// Builds the mixer for `cfg.op` with parameters drawn from cfg.seed. `len`
// and `dim` are the shape the mixer will see (after any selector stage);
// mlp and sgconv parameters are tied to them. attn and dist-attn built from
// the same config share identical weights. Throws UsageError for an unknown
// op.
std::unique_ptr<Mixer> make_mixer(const RunConfig &cfg, std::size_t len, std::size_t dim);

// ---------------------------------------------------------------------------
// Equivalence suite

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  bool passed = false;
};

struct VerifyOptions {
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 0;
  // Test hook: perturbs one softmax row before the row-stochastic check.
  bool inject_softmax_fault = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const noexcept;
  // One "PASS|FAIL <name> max_err=... tol=... seed=..." line per check and
  // a final summary line.
  std::string text() const;
};

// Names of the identities run for each seed, in report order.
std::vector<std::string> verify_check_names();

VerifyReport run_verify(const VerifyOptions &options);

// ---------------------------------------------------------------------------
// Timing and complexity fits

struct PowerFit {
  double exponent = 0.0;  // slope of log t against log L
  double r2 = 0.0;
  std::size_t points = 0;
};

PowerFit fit_power_law(const std::vector<double> &xs, const std::vector<double> &ys);

// Coefficient of determination of the least-squares fit t = c L^2.
double quadratic_fit_r2(const std::vector<double> &xs, const std::vector<double> &ys);

// Median per-call wall time in milliseconds over `repeats` samples. Each
// sample batches enough calls to span at least `min_sample_ms`.
double time_median_ms(const std::function<void()> &fn, std::size_t repeats, double min_sample_ms = 20.0);

struct BenchConfig {
  std::vector<std::string> ops;
  std::vector<std::size_t> lens;
  std::size_t dim = 64;
  std::size_t heads = 4;
  std::size_t workers = 4;
  std::size_t repeats = 3;
  std::size_t budget = std::size_t{1} << 24;
  std::uint64_t seed = 0;
  std::size_t state_order = 64;
  std::size_t sub_kernel = 16;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<std::pair<std::string, PowerFit>> fits;  // per op (and op@workers for dist-attn)
};

// Times each op over the length sweep. "dist-attn" delegates to
// scaling_bench (which also reports the "attn-ref" single-device rows); other
// ops time the corresponding mixer, with "ssm" on its convolutional path.
BenchResult run_bench(const BenchConfig &config);

// Header `op,exponent,r2,points`.
std::string fits_csv(const std::vector<std::pair<std::string, PowerFit>> &fits);

}  // namespace seqmix
