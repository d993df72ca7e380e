/*
 * Copyright 2026 The intentd Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the intentd library. All functions return an intentd_status;
 * on failure a thread-local message is available from intentd_last_error().
 * Output strings are written into caller buffers: when the capacity is too
 * small the call returns INTENTD_BUFFER_TOO_SMALL and stores the required size
 * (including the terminating NUL) in *needed when it is non-NULL.
 */
#ifndef INTENTD_INTENTD_H_
#define INTENTD_INTENTD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(INTENTD_BUILDING_LIBRARY)
#define INTENTD_API __declspec(dllexport)
#else
#define INTENTD_API __declspec(dllimport)
#endif
#else
#define INTENTD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum intentd_status {
  INTENTD_OK = 0,
  INTENTD_INVALID_ARGUMENT = 1,
  INTENTD_EMPTY_LABEL = 2,
  INTENTD_PARSE_ERROR = 3,
  INTENTD_UNKNOWN_FORMAT = 4,
  INTENTD_INVALID_RATIO = 5,
  INTENTD_EMPTY_INPUT = 6,
  INTENTD_PROVIDER_ERROR = 7,
  INTENTD_DIMENSION_MISMATCH = 8,
  INTENTD_ZERO_VECTOR = 9,
  INTENTD_EMPTY_POOL = 10,
  INTENTD_EMPTY_TEXT = 11,
  INTENTD_MISSING_EXAMPLES = 12,
  INTENTD_BACKEND_ERROR = 13,
  INTENTD_EMPTY_GENERATION = 14,
  INTENTD_BUDGET_EXCEEDED = 15,
  INTENTD_COUNT_MISMATCH = 16,
  INTENTD_UNPARSEABLE = 17,
  INTENTD_FORBIDDEN_LABEL = 18,
  INTENTD_VALIDATION_ERROR = 19,
  INTENTD_TRANSIENT_EXHAUSTED = 20,
  INTENTD_AUTH_ERROR = 21,
  INTENTD_NON_RETRYABLE = 22,
  INTENTD_MISSING_ANSWER = 23,
  INTENTD_CASSETTE_MISS = 24,
  INTENTD_INVALID_K = 25,
  INTENTD_NON_FINITE = 26,
  INTENTD_LENGTH_MISMATCH = 27,
  INTENTD_TOO_FEW_SAMPLES = 28,
  INTENTD_NUMERICAL_FAILURE = 29,
  INTENTD_IO_ERROR = 30,
  INTENTD_PARTIAL_RUN = 31,
  INTENTD_BUFFER_TOO_SMALL = 32,
  INTENTD_NOT_FOUND = 33,
  INTENTD_INTERNAL = 34
} intentd_status;

typedef struct intentd_config intentd_config;
typedef struct intentd_report intentd_report;

/* Library version, e.g. "0.1.0". */
INTENTD_API const char* intentd_version(void);
/* Symbolic name of a status, e.g. "CountMismatch". */
INTENTD_API const char* intentd_status_name(intentd_status status);
/* Process exit code for a status: 0 ok, 1 validation, 2 backend, 3 partial run. */
INTENTD_API int intentd_status_exit_code(intentd_status status);
/* Message of the last failure on this thread; empty after a success. */
INTENTD_API const char* intentd_last_error(void);

/* Configuration ("section.key" = value). Explicit sets win over file values. */
INTENTD_API intentd_status intentd_config_create(intentd_config** out);
INTENTD_API void intentd_config_destroy(intentd_config* cfg);
INTENTD_API intentd_status intentd_config_load_file(intentd_config* cfg, const char* path);
/* Replaces the configuration with the one stored in a run's config.json. */
INTENTD_API intentd_status intentd_config_load_snapshot(intentd_config* cfg, const char* path);
INTENTD_API intentd_status intentd_config_set(intentd_config* cfg, const char* key, const char* value);
INTENTD_API intentd_status intentd_config_get(const intentd_config* cfg, const char* key, char* buf, size_t cap,
                                              size_t* needed);
/* Validates the configuration as a run would. */
INTENTD_API intentd_status intentd_config_validate(const intentd_config* cfg);

/* Generates or reads back the task prompt; writes its cache path. */
INTENTD_API intentd_status intentd_gen_prompt(const intentd_config* cfg, int use_fallback, char* path_buf, size_t cap,
                                              size_t* needed, int* cache_hit);
/* Runs discovery into engine.output_dir, or continues resume_dir when non-NULL.
 * Writes the run directory. INTENTD_PARTIAL_RUN when a batch failed after
 * progress was persisted. */
INTENTD_API intentd_status intentd_run(const intentd_config* cfg, const char* resume_dir, char* dir_buf, size_t cap,
                                       size_t* needed);

typedef struct intentd_eval_options {
  int64_t k_override; /* <= 0: estimate with DBSCAN */
  double eps;         /* DBSCAN radius (cosine distance) */
  int compute_fbd;
  double fbd_shrinkage;
} intentd_eval_options;

/* eps 0.5, no override, no FBD, shrinkage 1e-6. */
INTENTD_API intentd_eval_options intentd_eval_options_default(void);
/* Evaluates a run directory, writes report.json and contingency.csv into it. */
INTENTD_API intentd_status intentd_eval(const char* run_dir, const intentd_eval_options* options,
                                        intentd_report** out);
/* Reads a report file back. */
INTENTD_API intentd_status intentd_report_load(const char* path, intentd_report** out);
INTENTD_API void intentd_report_destroy(intentd_report* report);
/* Metric names: nmi, ari, acc, ndi, ndi_deviation, k_requested, k_used,
 * n_items, gold_intents, distinct_predicted, fbd. INTENTD_NOT_FOUND when absent. */
INTENTD_API intentd_status intentd_report_get(const intentd_report* report, const char* metric, double* value);
/* Tabulates report files; format is "text" or "csv". */
INTENTD_API intentd_status intentd_tabulate(const char* const* report_paths, size_t n, const char* format, char* buf,
                                            size_t cap, size_t* needed);

/* Primitives. */
INTENTD_API intentd_status intentd_normalize_label(const char* raw, char* buf, size_t cap, size_t* needed);
INTENTD_API intentd_status intentd_nmi(const int64_t* gold, const int64_t* clusters, size_t n, double* out);
INTENTD_API intentd_status intentd_ari(const int64_t* gold, const int64_t* clusters, size_t n, double* out);
INTENTD_API intentd_status intentd_acc(const int64_t* gold, const int64_t* clusters, size_t n, double* out);
/* Minimum-cost assignment of a row-major rows x cols matrix. assignment has
 * room for `rows` entries; unmatched rows get -1. */
INTENTD_API intentd_status intentd_hungarian(const double* cost, size_t rows, size_t cols, int64_t* assignment,
                                             double* total_cost);
INTENTD_API intentd_status intentd_estimate_tokens(const char* text, size_t* out);
/* Hashed character-trigram embedding (unit norm) into out[0..dim). */
INTENTD_API intentd_status intentd_trigram_embed(const char* text, size_t dim, double* out);

#ifdef __cplusplus
}
#endif

#endif /* INTENTD_INTENTD_H_ */
