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
// seqmix command-line harness: mix, verify, bench, audit-memory.
//
// Exit status: 0 success, 1 a requested check failed, 2 usage error,
// 3 I/O error, 4 any other library error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqmix/seqmix.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitError = 4;

constexpr const char *kOps[] = {"conv", "attn", "kernel-attn", "mlp", "fnet", "ssm", "sgconv", "dist-attn"};

struct CliFailure {
  int code;
  std::string message;
};

void check(seqmix_status st) {
  if (st == SEQMIX_OK) return;
  int code = kExitError;
  if (st == SEQMIX_ERR_IO) code = kExitIo;
  if (st == SEQMIX_ERR_USAGE) code = kExitUsage;
  throw CliFailure{code, std::string(seqmix_status_string(st)) + ": " + seqmix_last_error()};
}

struct MatrixDeleter {
  void operator()(seqmix_matrix *m) const { seqmix_matrix_destroy(m); }
};
struct MixerDeleter {
  void operator()(seqmix_mixer *m) const { seqmix_mixer_destroy(m); }
};
struct ReportDeleter {
  void operator()(seqmix_report *r) const { seqmix_report_destroy(r); }
};
struct TableDeleter {
  void operator()(seqmix_table *t) const { seqmix_table_destroy(t); }
};
using MatrixPtr = std::unique_ptr<seqmix_matrix, MatrixDeleter>;
using MixerPtr = std::unique_ptr<seqmix_mixer, MixerDeleter>;
using ReportPtr = std::unique_ptr<seqmix_report, ReportDeleter>;
using TablePtr = std::unique_ptr<seqmix_table, TableDeleter>;

std::string op_list() {
  std::string s;
  for (const char *op : kOps) {
    if (!s.empty()) s += ", ";
    s += op;
  }
  return s;
}

void require_op(const std::string &op) {
  for (const char *known : kOps) {
    if (op == known) return;
  }
  throw CliFailure{kExitUsage, "unknown op '" + op + "'; valid ops: " + op_list()};
}

// Writes `text` to `path`, or to stdout for "" or "-".
void emit(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{kExitIo, "cannot open '" + path + "' for writing"};
  out << text;
  if (!out) throw CliFailure{kExitIo, "write to '" + path + "' failed"};
}

std::vector<std::size_t> default_lens(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> lens;
  for (std::size_t l = lo; l <= hi; l *= 2) lens.push_back(l);
  return lens;
}

// "a" or "a..b".
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string &text) {
  auto parse_one = [&](const std::string &s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw CliFailure{kExitUsage, "invalid seed '" + text + "'; expected N or A..B"};
    }
    try {
      return std::stoull(s);
    } catch (const std::exception &) {
      throw CliFailure{kExitUsage, "seed out of range: '" + text + "'"};
    }
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = parse_one(text);
    return {v, v};
  }
  const auto a = parse_one(text.substr(0, dots));
  const auto b = parse_one(text.substr(dots + 2));
  if (a > b) throw CliFailure{kExitUsage, "seed range '" + text + "' is empty"};
  return {a, b};
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

struct MixArgs {
  std::string op;
  std::size_t len = 64;
  std::size_t dim = 16;
  std::size_t heads = 2;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::vector<double> kernel;
  std::optional<double> tau;
  std::string scorer = "l2_norm";
  std::string selector;
  std::string in;
  std::string out;
  std::size_t order = 16;
  double dt = 0.05;
  std::size_t sub_kernel = 16;
  double decay = 0.5;
};

int run_mix(const MixArgs &a) {
  require_op(a.op);

  MatrixPtr x;
  {
    seqmix_matrix *raw = nullptr;
    if (!a.in.empty()) {
      check(seqmix_matrix_load(a.in.c_str(), &raw));
    } else {
      check(seqmix_matrix_random_normal(a.len, a.dim, a.seed, &raw));
    }
    x.reset(raw);
  }

  std::string selector = a.selector;
  if (selector.empty() && a.tau) {
    selector = "tau=" + format_double(*a.tau) + ",scorer=" + a.scorer + ",seed=" + std::to_string(a.seed);
  }
  if (!selector.empty()) {
    seqmix_matrix *raw = nullptr;
    size_t kept = 0;
    check(seqmix_select(x.get(), selector.c_str(), &raw, nullptr, &kept));
    x.reset(raw);
  }
  const std::size_t rows = seqmix_matrix_rows(x.get());
  const std::size_t cols = seqmix_matrix_cols(x.get());

  seqmix_mixer_config cfg;
  seqmix_mixer_config_init(&cfg);
  cfg.op = a.op.c_str();
  cfg.len = rows;
  cfg.dim = cols;
  cfg.heads = a.heads;
  cfg.workers = a.workers;
  cfg.seed = a.seed;
  cfg.kernel = a.kernel.empty() ? nullptr : a.kernel.data();
  cfg.kernel_len = a.kernel.size();
  cfg.state_order = a.order;
  cfg.dt = a.dt;
  cfg.sub_kernel = a.sub_kernel;
  cfg.decay = a.decay;

  MatrixPtr y;
  std::string diff = "NA";
  std::string peak = "NA";
  if (a.op == "dist-attn") {
    std::vector<seqmix_worker_stats> stats(a.workers);
    size_t shuffled[2] = {0, 0};
    seqmix_matrix *raw = nullptr;
    check(seqmix_distributed_attention(&cfg, x.get(), &raw, stats.data(), stats.size(), shuffled));
    y.reset(raw);
    std::size_t max_peak = 0;
    for (const auto &s : stats) max_peak = std::max(max_peak, s.peak_score_elements);
    peak = std::to_string(max_peak);

    seqmix_mixer_config ref = cfg;
    ref.op = "attn";
    seqmix_mixer *mixer = nullptr;
    check(seqmix_mixer_create(&ref, &mixer));
    MixerPtr single(mixer);
    seqmix_matrix *yr = nullptr;
    check(seqmix_mixer_apply(single.get(), x.get(), &yr));
    MatrixPtr y_ref(yr);
    double d = 0.0;
    check(seqmix_matrix_max_abs_diff(y.get(), y_ref.get(), &d));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", d);
    diff = buf;
  } else {
    seqmix_mixer *mixer = nullptr;
    check(seqmix_mixer_create(&cfg, &mixer));
    MixerPtr m(mixer);
    seqmix_matrix *raw = nullptr;
    check(seqmix_mixer_apply(m.get(), x.get(), &raw));
    y.reset(raw);
  }

  std::ostringstream summary;
  summary << "op,L,D,H,workers,seed,tokens_kept,out_rows,out_cols,peak_score_elems,max_abs_diff_vs_single\n"
          << a.op << ',' << (a.in.empty() ? a.len : seqmix_matrix_rows(x.get())) << ',' << cols << ','
          << a.heads << ',' << a.workers << ',' << a.seed << ',' << rows << ',' << seqmix_matrix_rows(y.get()) << ','
          << seqmix_matrix_cols(y.get()) << ',' << peak << ',' << diff << '\n';

  if (a.out.empty()) {
    // No output file: the matrix goes to stdout and the summary to stderr.
    const double *d = seqmix_matrix_data(y.get());
    std::printf("%zu %zu\n", seqmix_matrix_rows(y.get()), seqmix_matrix_cols(y.get()));
    for (std::size_t r = 0; r < seqmix_matrix_rows(y.get()); ++r) {
      for (std::size_t c = 0; c < seqmix_matrix_cols(y.get()); ++c) {
        std::printf(c ? " %.17g" : "%.17g", d[r * seqmix_matrix_cols(y.get()) + c]);
      }
      std::printf("\n");
    }
    std::fflush(stdout);
    std::fputs(summary.str().c_str(), stderr);
  } else {
    check(seqmix_matrix_save(y.get(), a.out.c_str()));
    emit("-", summary.str());
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string seed = "0";
  bool inject_fault = false;
  std::string out;
};

int run_verify(const VerifyArgs &a) {
  const auto [first, last] = parse_seed_range(a.seed);
  seqmix_report *raw = nullptr;
  check(seqmix_verify(first, last, a.inject_fault ? SEQMIX_VERIFY_INJECT_SOFTMAX_FAULT : 0u, &raw));
  ReportPtr report(raw);
  const std::string text = seqmix_report_text(report.get());
  emit("-", text);
  if (!a.out.empty()) emit(a.out, text);
  return seqmix_report_passed(report.get()) ? kExitOk : kExitCheckFailed;
}

struct BenchArgs {
  std::vector<std::string> ops{"attn", "fnet", "sgconv", "ssm"};
  std::vector<std::size_t> lens;
  std::size_t dim = 64;
  std::size_t heads = 4;
  std::size_t workers = 4;
  std::size_t repeats = 3;
  std::size_t budget = std::size_t{1} << 24;
  std::uint64_t seed = 0;
  std::size_t order = 64;
  std::size_t sub_kernel = 16;
  std::string out;
  std::string fits_out;
};

int run_bench(const BenchArgs &a) {
  for (const auto &op : a.ops) require_op(op);
  const std::vector<std::size_t> lens = a.lens.empty() ? default_lens(256, 4096) : a.lens;
  std::vector<const char *> ops;
  for (const auto &op : a.ops) ops.push_back(op.c_str());

  seqmix_bench_config cfg;
  seqmix_bench_config_init(&cfg);
  cfg.ops = ops.data();
  cfg.op_count = ops.size();
  cfg.lens = lens.data();
  cfg.len_count = lens.size();
  cfg.dim = a.dim;
  cfg.heads = a.heads;
  cfg.workers = a.workers;
  cfg.repeats = a.repeats;
  cfg.budget = a.budget;
  cfg.seed = a.seed;
  cfg.state_order = a.order;
  cfg.sub_kernel = a.sub_kernel;

  seqmix_table *rec = nullptr;
  seqmix_table *fit = nullptr;
  check(seqmix_bench(&cfg, &rec, &fit));
  TablePtr records(rec);
  TablePtr fits(fit);
  emit(a.out, seqmix_table_csv(records.get()));
  if (a.fits_out.empty()) {
    std::fputs(seqmix_table_csv(fits.get()), stderr);
  } else {
    emit(a.fits_out, seqmix_table_csv(fits.get()));
  }
  return kExitOk;
}

struct AuditArgs {
  std::size_t sub_kernel = 16;
  std::size_t dim = 1;
  std::vector<std::size_t> lens;
  std::string out;
};

int run_audit(const AuditArgs &a) {
  const std::vector<std::size_t> lens = a.lens.empty() ? default_lens(64, 8192) : a.lens;
  seqmix_table *raw = nullptr;
  check(seqmix_memory_audit(a.sub_kernel, a.dim, lens.data(), lens.size(), &raw));
  TablePtr table(raw);
  emit(a.out, seqmix_table_csv(table.get()));
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"seqmix: token-mixing operators, equivalence checks and benchmarks"};
  app.require_subcommand(1);

  MixArgs mix;
  auto *mix_cmd = app.add_subcommand("mix", "Apply one mixer to a generated or loaded sequence");
  mix_cmd->add_option("--op", mix.op, "Mixer: " + op_list())->required();
  mix_cmd->add_option("--len", mix.len, "Sequence length of the generated input")->capture_default_str();
  mix_cmd->add_option("--dim", mix.dim, "Channel width of the generated input")->capture_default_str();
  mix_cmd->add_option("--heads", mix.heads, "Attention heads")->capture_default_str();
  mix_cmd->add_option("--workers", mix.workers, "Workers for dist-attn")->capture_default_str();
  mix_cmd->add_option("--seed", mix.seed, "Seed for input and parameters")->capture_default_str();
  mix_cmd->add_option("--kernel", mix.kernel, "Comma separated conv weights w_0,...")->delimiter(',');
  mix_cmd->add_option("--tau", mix.tau, "Selector threshold (enables the selector)");
  mix_cmd->add_option("--scorer", mix.scorer, "Selector scorer for --tau")
      ->check(CLI::IsMember({"l2_norm", "projection"}))
      ->capture_default_str();
  mix_cmd->add_option("--selector", mix.selector, "Selector spec tau=..,scorer=..[,seed=..]");
  mix_cmd->add_option("--in", mix.in, "Input matrix file (overrides --len/--dim)");
  mix_cmd->add_option("--out", mix.out, "Output matrix file; without it the matrix goes to stdout");
  mix_cmd->add_option("--order", mix.order, "SSM state order N")->capture_default_str();
  mix_cmd->add_option("--dt", mix.dt, "SSM step size")->capture_default_str();
  mix_cmd->add_option("--sub-kernel", mix.sub_kernel, "SGConv sub-kernel length k")->capture_default_str();
  mix_cmd->add_option("--decay", mix.decay, "SGConv decay alpha")->capture_default_str();

  VerifyArgs verify;
  auto *verify_cmd = app.add_subcommand("verify", "Run the equivalence checks over a seed range");
  verify_cmd->add_option("--seed", verify.seed, "Seed N or range A..B")->capture_default_str();
  verify_cmd->add_flag("--inject-fault", verify.inject_fault, "Perturb one softmax row (self-test)");
  verify_cmd->add_option("--out", verify.out, "Also write the report to this file");

  BenchArgs bench;
  auto *bench_cmd = app.add_subcommand("bench", "Time mixers over a length sweep and fit scaling exponents");
  bench_cmd->add_option("--op", bench.ops, "Comma separated ops")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--lens", bench.lens, "Comma separated lengths (default 256..4096)")->delimiter(',');
  bench_cmd->add_option("--dim", bench.dim)->capture_default_str();
  bench_cmd->add_option("--heads", bench.heads)->capture_default_str();
  bench_cmd->add_option("--workers", bench.workers)->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
  bench_cmd->add_option("--budget", bench.budget, "Score elements per worker")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--order", bench.order, "SSM state order N")->capture_default_str();
  bench_cmd->add_option("--sub-kernel", bench.sub_kernel)->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Records CSV path (default stdout)");
  bench_cmd->add_option("--fits-out", bench.fits_out, "Fits CSV path (default stderr)");

  AuditArgs audit;
  auto *audit_cmd = app.add_subcommand("audit-memory", "SGConv parameter and kernel size ledger");
  audit_cmd->add_option("--sub-kernel,-k", audit.sub_kernel)->capture_default_str();
  audit_cmd->add_option("--dim", audit.dim)->capture_default_str();
  audit_cmd->add_option("--lens", audit.lens, "Comma separated lengths (default 64..8192)")->delimiter(',');
  audit_cmd->add_option("--out", audit.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*mix_cmd) return run_mix(mix);
    if (*verify_cmd) return run_verify(verify);
    if (*bench_cmd) return run_bench(bench);
    if (*audit_cmd) return run_audit(audit);
  } catch (const CliFailure &f) {
    std::fprintf(stderr, "seqmix: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "seqmix: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
