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
/*
 * C interface to the seqmix token-mixing library.
 *
 * Every handle is opaque and owned by the caller once returned; release it
 * with the matching *_destroy function (NULL is accepted). Functions that can
 * fail return a seqmix_status; on failure seqmix_last_error() describes the
 * problem for the calling thread until its next failing call.
 */
#ifndef SEQMIX_SEQMIX_H_
#define SEQMIX_SEQMIX_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEQMIX_BUILDING_LIBRARY)
#    define SEQMIX_API __declspec(dllexport)
#  else
#    define SEQMIX_API __declspec(dllimport)
#  endif
#else
#  define SEQMIX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum seqmix_status {
  SEQMIX_OK = 0,
  SEQMIX_ERR_SHAPE = 1,
  SEQMIX_ERR_PARAM = 2,
  SEQMIX_ERR_NUMERIC = 3,
  SEQMIX_ERR_PROTOCOL = 4,
  SEQMIX_ERR_LAYOUT = 5,
  SEQMIX_ERR_IO = 6,
  SEQMIX_ERR_USAGE = 7,
  SEQMIX_ERR_INVALID_ARGUMENT = 8,
  SEQMIX_ERR_INTERNAL = 9
} seqmix_status;

SEQMIX_API const char *seqmix_version(void);
SEQMIX_API const char *seqmix_status_string(seqmix_status status);
SEQMIX_API const char *seqmix_last_error(void);

/* ---- matrices ---------------------------------------------------------- */

typedef struct seqmix_matrix seqmix_matrix;

/* `data` holds rows*cols row-major values, or NULL for zeros. */
SEQMIX_API seqmix_status seqmix_matrix_create(size_t rows, size_t cols, const double *data, seqmix_matrix **out);
/* Seeded standard-normal matrix, identical to the CLI's generated input. */
SEQMIX_API seqmix_status seqmix_matrix_random_normal(size_t rows, size_t cols, uint64_t seed, seqmix_matrix **out);
/* Text format: "rows cols" line, then row-major decimals. */
SEQMIX_API seqmix_status seqmix_matrix_load(const char *path, seqmix_matrix **out);
SEQMIX_API seqmix_status seqmix_matrix_save(const seqmix_matrix *m, const char *path);
SEQMIX_API size_t seqmix_matrix_rows(const seqmix_matrix *m);
SEQMIX_API size_t seqmix_matrix_cols(const seqmix_matrix *m);
/* Borrowed pointer, valid until the matrix is destroyed. */
SEQMIX_API const double *seqmix_matrix_data(const seqmix_matrix *m);
SEQMIX_API seqmix_status seqmix_matrix_max_abs_diff(const seqmix_matrix *a, const seqmix_matrix *b, double *out);
SEQMIX_API void seqmix_matrix_destroy(seqmix_matrix *m);

/* ---- mixers ------------------------------------------------------------ */

typedef struct seqmix_mixer seqmix_mixer;

typedef struct seqmix_mixer_config {
  const char *op; /* conv, attn, kernel-attn, mlp, fnet, ssm, sgconv, dist-attn */
  size_t len;     /* sequence length the mixer is bound to (mlp, sgconv) */
  size_t dim;
  size_t heads;
  size_t workers;
  uint64_t seed;
  const double *kernel; /* conv weights, or NULL for a random window of 4 */
  size_t kernel_len;
  size_t state_order; /* ssm N */
  double dt;          /* ssm step */
  size_t sub_kernel;  /* sgconv k */
  double decay;       /* sgconv alpha */
} seqmix_mixer_config;

SEQMIX_API void seqmix_mixer_config_init(seqmix_mixer_config *config);
SEQMIX_API seqmix_status seqmix_mixer_create(const seqmix_mixer_config *config, seqmix_mixer **out);
SEQMIX_API const char *seqmix_mixer_name(const seqmix_mixer *mixer);
/* learned: 1 learned / 0 fixed; input_dependent: 1 dependent / 0 independent. */
SEQMIX_API seqmix_status seqmix_mixer_taxonomy(const seqmix_mixer *mixer, int *learned, int *input_dependent);
SEQMIX_API seqmix_status seqmix_mixer_apply(const seqmix_mixer *mixer, const seqmix_matrix *in, seqmix_matrix **out);
SEQMIX_API void seqmix_mixer_destroy(seqmix_mixer *mixer);

/* ---- distributed attention --------------------------------------------- */

typedef struct seqmix_worker_stats {
  size_t worker;
  size_t peak_score_elements;
  size_t bytes_sent;
  double wall_ms;
} seqmix_worker_stats;

/* Runs the sharded attention for `config` (heads, workers, seed). `stats`
 * receives min(workers, stats_capacity) entries; `shuffle_elements` (may be
 * NULL) receives the payload element counts of the two shuffles. */
SEQMIX_API seqmix_status seqmix_distributed_attention(const seqmix_mixer_config *config, const seqmix_matrix *in,
                                                      seqmix_matrix **out, seqmix_worker_stats *stats,
                                                      size_t stats_capacity, size_t shuffle_elements[2]);

/* ---- selector ---------------------------------------------------------- */

/* `spec` is "tau=<v>,scorer=<l2_norm|projection>[,seed=<n>]". `kept` (may be
 * NULL) needs room for rows(in) indices. */
SEQMIX_API seqmix_status seqmix_select(const seqmix_matrix *in, const char *spec, seqmix_matrix **out, size_t *kept,
                                       size_t *kept_count);

/* ---- verification ------------------------------------------------------ */

typedef struct seqmix_report seqmix_report;

#define SEQMIX_VERIFY_INJECT_SOFTMAX_FAULT 1u

SEQMIX_API seqmix_status seqmix_verify(uint64_t first_seed, uint64_t last_seed, unsigned flags, seqmix_report **out);
SEQMIX_API int seqmix_report_passed(const seqmix_report *report);
SEQMIX_API size_t seqmix_report_count(const seqmix_report *report);
SEQMIX_API seqmix_status seqmix_report_entry(const seqmix_report *report, size_t index, const char **name,
                                             double *max_error, double *tolerance, uint64_t *seed, int *passed);
SEQMIX_API const char *seqmix_report_text(const seqmix_report *report);
SEQMIX_API void seqmix_report_destroy(seqmix_report *report);

/* ---- benchmarks and audits --------------------------------------------- */

typedef struct seqmix_table seqmix_table;

typedef struct seqmix_bench_config {
  const char *const *ops;
  size_t op_count;
  const size_t *lens;
  size_t len_count;
  size_t dim;
  size_t heads;
  size_t workers;
  size_t repeats;
  size_t budget; /* score elements per worker */
  uint64_t seed;
  size_t state_order;
  size_t sub_kernel;
} seqmix_bench_config;

SEQMIX_API void seqmix_bench_config_init(seqmix_bench_config *config);
/* records: op,workers,L,D,H,wall_ms,peak_score_elems,bytes_shuffled,max_feasible
 * fits:    op,exponent,r2,points */
SEQMIX_API seqmix_status seqmix_bench(const seqmix_bench_config *config, seqmix_table **records, seqmix_table **fits);
/* L,s,param_elements,kernel_elements */
SEQMIX_API seqmix_status seqmix_memory_audit(size_t sub_kernel, size_t dim, const size_t *lens, size_t len_count,
                                             seqmix_table **out);
SEQMIX_API const char *seqmix_table_csv(const seqmix_table *table);
SEQMIX_API void seqmix_table_destroy(seqmix_table *table);

#ifdef __cplusplus
}
#endif

#endif /* SEQMIX_SEQMIX_H_ */
