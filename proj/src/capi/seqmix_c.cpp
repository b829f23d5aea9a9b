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
#include "seqmix/seqmix.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "seqmix/error.hpp"
#include "seqmix/harness.hpp"
#include "seqmix/random.hpp"
#include "seqmix/sgconv.hpp"

struct seqmix_matrix {
  seqmix::RealMat m;
};

struct seqmix_mixer {
  std::unique_ptr<seqmix::Mixer> impl;
  std::string name;
};

struct seqmix_report {
  seqmix::VerifyReport report;
  std::string text;
};

struct seqmix_table {
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

seqmix_status status_of(seqmix::ErrorCode code) {
  switch (code) {
    case seqmix::ErrorCode::kShape: return SEQMIX_ERR_SHAPE;
    case seqmix::ErrorCode::kParam: return SEQMIX_ERR_PARAM;
    case seqmix::ErrorCode::kNumeric: return SEQMIX_ERR_NUMERIC;
    case seqmix::ErrorCode::kProtocol: return SEQMIX_ERR_PROTOCOL;
    case seqmix::ErrorCode::kLayout: return SEQMIX_ERR_LAYOUT;
    case seqmix::ErrorCode::kIo: return SEQMIX_ERR_IO;
    case seqmix::ErrorCode::kUsage: return SEQMIX_ERR_USAGE;
  }
  return SEQMIX_ERR_INTERNAL;
}

seqmix_status fail(seqmix_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
seqmix_status guarded(Fn &&fn) noexcept {
  try {
    fn();
    return SEQMIX_OK;
  } catch (const seqmix::Error &e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(SEQMIX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(SEQMIX_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SEQMIX_ERR_INTERNAL, "unknown exception");
  }
}

seqmix_status null_arg(const char *what) {
  return fail(SEQMIX_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

seqmix::RunConfig run_config(const seqmix_mixer_config &c) {
  seqmix::RunConfig cfg;
  cfg.op = c.op ? c.op : "";
  cfg.len = c.len;
  cfg.dim = c.dim;
  cfg.heads = c.heads;
  cfg.workers = c.workers;
  cfg.seed = c.seed;
  if (c.kernel && c.kernel_len > 0) cfg.kernel.assign(c.kernel, c.kernel + c.kernel_len);
  cfg.state_order = c.state_order;
  cfg.dt = c.dt;
  cfg.sub_kernel = c.sub_kernel;
  cfg.decay = c.decay;
  return cfg;
}

}  // namespace

extern "C" {

const char *seqmix_version(void) { return "1.0.0"; }

const char *seqmix_status_string(seqmix_status status) {
  switch (status) {
    case SEQMIX_OK: return "ok";
    case SEQMIX_ERR_SHAPE: return "shape error";
    case SEQMIX_ERR_PARAM: return "parameter error";
    case SEQMIX_ERR_NUMERIC: return "numeric error";
    case SEQMIX_ERR_PROTOCOL: return "protocol error";
    case SEQMIX_ERR_LAYOUT: return "layout error";
    case SEQMIX_ERR_IO: return "i/o error";
    case SEQMIX_ERR_USAGE: return "usage error";
    case SEQMIX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SEQMIX_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *seqmix_last_error(void) { return g_last_error.c_str(); }

seqmix_status seqmix_matrix_create(size_t rows, size_t cols, const double *data, seqmix_matrix **out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<seqmix_matrix>();
    h->m = seqmix::RealMat(rows, cols, 0.0);
    if (data && rows * cols > 0) std::copy(data, data + rows * cols, h->m.data().begin());
    *out = h.release();
  });
}

seqmix_status seqmix_matrix_random_normal(size_t rows, size_t cols, uint64_t seed, seqmix_matrix **out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<seqmix_matrix>();
    h->m = seqmix::random_normal(rows, cols, seed, seqmix::Stream::kInput);
    *out = h.release();
  });
}

seqmix_status seqmix_matrix_load(const char *path, seqmix_matrix **out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<seqmix_matrix>();
    h->m = seqmix::load_matrix(path);
    *out = h.release();
  });
}

seqmix_status seqmix_matrix_save(const seqmix_matrix *m, const char *path) {
  if (!m) return null_arg("matrix");
  if (!path) return null_arg("path");
  return guarded([&] { seqmix::save_matrix(path, m->m); });
}

size_t seqmix_matrix_rows(const seqmix_matrix *m) { return m ? m->m.rows() : 0; }
size_t seqmix_matrix_cols(const seqmix_matrix *m) { return m ? m->m.cols() : 0; }
const double *seqmix_matrix_data(const seqmix_matrix *m) { return m ? m->m.data().data() : nullptr; }

seqmix_status seqmix_matrix_max_abs_diff(const seqmix_matrix *a, const seqmix_matrix *b, double *out) {
  if (!a || !b) return null_arg("matrix");
  if (!out) return null_arg("out");
  return guarded([&] { *out = seqmix::max_abs_diff(a->m, b->m); });
}

void seqmix_matrix_destroy(seqmix_matrix *m) { delete m; }

void seqmix_mixer_config_init(seqmix_mixer_config *config) {
  if (!config) return;
  const seqmix::RunConfig d;
  *config = seqmix_mixer_config{};
  config->op = "attn";
  config->len = d.len;
  config->dim = d.dim;
  config->heads = d.heads;
  config->workers = d.workers;
  config->seed = d.seed;
  config->state_order = d.state_order;
  config->dt = d.dt;
  config->sub_kernel = d.sub_kernel;
  config->decay = d.decay;
}

seqmix_status seqmix_mixer_create(const seqmix_mixer_config *config, seqmix_mixer **out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const seqmix::RunConfig cfg = run_config(*config);
    auto h = std::make_unique<seqmix_mixer>();
    h->impl = seqmix::make_mixer(cfg, cfg.len, cfg.dim);
    h->name = std::string(h->impl->name());
    *out = h.release();
  });
}

const char *seqmix_mixer_name(const seqmix_mixer *mixer) { return mixer ? mixer->name.c_str() : ""; }

seqmix_status seqmix_mixer_taxonomy(const seqmix_mixer *mixer, int *learned, int *input_dependent) {
  if (!mixer) return null_arg("mixer");
  const seqmix::Taxonomy t = mixer->impl->taxonomy();
  if (learned) *learned = t.weights == seqmix::WeightKind::kLearned ? 1 : 0;
  if (input_dependent) *input_dependent = t.input == seqmix::InputDependence::kDependent ? 1 : 0;
  return SEQMIX_OK;
}

seqmix_status seqmix_mixer_apply(const seqmix_mixer *mixer, const seqmix_matrix *in, seqmix_matrix **out) {
  if (!mixer) return null_arg("mixer");
  if (!in) return null_arg("input");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    seqmix::Seq y = mixer->impl->mix(seqmix::Seq(in->m));
    auto h = std::make_unique<seqmix_matrix>();
    h->m = y.values();
    *out = h.release();
  });
}

void seqmix_mixer_destroy(seqmix_mixer *mixer) { delete mixer; }

seqmix_status seqmix_distributed_attention(const seqmix_mixer_config *config, const seqmix_matrix *in,
                                          seqmix_matrix **out, seqmix_worker_stats *stats,
                                          size_t stats_capacity, size_t shuffle_elements[2]) {
  if (!config) return null_arg("config");
  if (!in) return null_arg("input");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const seqmix::RunConfig cfg = run_config(*config);
    const seqmix::Seq x(in->m);
    const seqmix::AttnParams p = seqmix::attention_params(cfg, x.dim());
    seqmix::DistResult r = seqmix::distributed_attention(x, p, seqmix::plan_layout(x.len(), p.heads, cfg.workers));
    if (stats) {
      const std::size_t n = std::min(stats_capacity, r.stats.size());
      for (std::size_t i = 0; i < n; ++i) {
        stats[i] = {r.stats[i].worker, r.stats[i].peak_score_elements, r.stats[i].bytes_sent, r.stats[i].wall_ms};
      }
    }
    if (shuffle_elements) {
      shuffle_elements[0] = r.shuffle1_elements;
      shuffle_elements[1] = r.shuffle2_elements;
    }
    auto h = std::make_unique<seqmix_matrix>();
    h->m = r.output.values();
    *out = h.release();
  });
}

seqmix_status seqmix_select(const seqmix_matrix *in, const char *spec, seqmix_matrix **out, size_t *kept,
                            size_t *kept_count) {
  if (!in) return null_arg("input");
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto cfg = seqmix::SelectorConfig::parse(spec);
    seqmix::Selection s = seqmix::select_tokens(seqmix::Seq(in->m), cfg);
    if (kept) std::copy(s.kept.begin(), s.kept.end(), kept);
    if (kept_count) *kept_count = s.kept.size();
    auto h = std::make_unique<seqmix_matrix>();
    h->m = s.tokens.values();
    *out = h.release();
  });
}

seqmix_status seqmix_verify(uint64_t first_seed, uint64_t last_seed, unsigned flags, seqmix_report **out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (first_seed > last_seed) return fail(SEQMIX_ERR_USAGE, "verify: first seed exceeds last seed");
  return guarded([&] {
    seqmix::VerifyOptions opt;
    opt.first_seed = first_seed;
    opt.last_seed = last_seed;
    opt.inject_softmax_fault = (flags & SEQMIX_VERIFY_INJECT_SOFTMAX_FAULT) != 0;
    auto h = std::make_unique<seqmix_report>();
    h->report = seqmix::run_verify(opt);
    h->text = h->report.text();
    *out = h.release();
  });
}

int seqmix_report_passed(const seqmix_report *report) { return report && report->report.passed() ? 1 : 0; }

size_t seqmix_report_count(const seqmix_report *report) { return report ? report->report.checks.size() : 0; }

seqmix_status seqmix_report_entry(const seqmix_report *report, size_t index, const char **name, double *max_error,
                                  double *tolerance, uint64_t *seed, int *passed) {
  if (!report) return null_arg("report");
  if (index >= report->report.checks.size()) {
    return fail(SEQMIX_ERR_INVALID_ARGUMENT, "report entry " + std::to_string(index) + " out of range");
  }
  const auto &c = report->report.checks[index];
  if (name) *name = c.name.c_str();
  if (max_error) *max_error = c.max_error;
  if (tolerance) *tolerance = c.tolerance;
  if (seed) *seed = c.seed;
  if (passed) *passed = c.passed ? 1 : 0;
  return SEQMIX_OK;
}

const char *seqmix_report_text(const seqmix_report *report) { return report ? report->text.c_str() : ""; }

void seqmix_report_destroy(seqmix_report *report) { delete report; }

void seqmix_bench_config_init(seqmix_bench_config *config) {
  if (!config) return;
  const seqmix::BenchConfig d;
  *config = seqmix_bench_config{};
  config->dim = d.dim;
  config->heads = d.heads;
  config->workers = d.workers;
  config->repeats = d.repeats;
  config->budget = d.budget;
  config->seed = d.seed;
  config->state_order = d.state_order;
  config->sub_kernel = d.sub_kernel;
}

seqmix_status seqmix_bench(const seqmix_bench_config *config, seqmix_table **records, seqmix_table **fits) {
  if (!config) return null_arg("config");
  if (!records) return null_arg("records");
  *records = nullptr;
  if (fits) *fits = nullptr;
  if (config->op_count > 0 && !config->ops) return null_arg("ops");
  if (config->len_count > 0 && !config->lens) return null_arg("lens");
  return guarded([&] {
    seqmix::BenchConfig bc;
    for (std::size_t i = 0; i < config->op_count; ++i) {
      if (!config->ops[i]) throw seqmix::UsageError("bench: op name must not be NULL");
      bc.ops.emplace_back(config->ops[i]);
    }
    bc.lens.assign(config->lens, config->lens + config->len_count);
    bc.dim = config->dim;
    bc.heads = config->heads;
    bc.workers = config->workers;
    bc.repeats = config->repeats;
    bc.budget = config->budget;
    bc.seed = config->seed;
    bc.state_order = config->state_order;
    bc.sub_kernel = config->sub_kernel;
    const seqmix::BenchResult r = seqmix::run_bench(bc);
    auto rec = std::make_unique<seqmix_table>();
    rec->csv = seqmix::bench_csv(r.records);
    std::unique_ptr<seqmix_table> fit;
    if (fits) {
      fit = std::make_unique<seqmix_table>();
      fit->csv = seqmix::fits_csv(r.fits);
    }
    *records = rec.release();
    if (fits) *fits = fit.release();
  });
}

seqmix_status seqmix_memory_audit(size_t sub_kernel, size_t dim, const size_t *lens, size_t len_count,
                                  seqmix_table **out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (len_count > 0 && !lens) return null_arg("lens");
  return guarded([&] {
    auto h = std::make_unique<seqmix_table>();
    h->csv = seqmix::memory_audit_csv(seqmix::memory_audit(sub_kernel, dim, {lens, lens + len_count}));
    *out = h.release();
  });
}

const char *seqmix_table_csv(const seqmix_table *table) { return table ? table->csv.c_str() : ""; }

void seqmix_table_destroy(seqmix_table *table) { delete table; }

}  // extern "C"
