/*
 * C interface to the corrcov library: shape models, bound evaluation and the
 * Monte Carlo experiments. Every function returns a corrcov_status; on failure
 * corrcov_last_error() holds a message for the calling thread. Strings and
 * buffers handed out by the library are released with corrcov_string_free and
 * corrcov_buffer_free.
 */
#ifndef CORRCOV_H
#define CORRCOV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CORRCOV_BUILDING)
#define CORRCOV_API __declspec(dllexport)
#else
#define CORRCOV_API __declspec(dllimport)
#endif
#else
#define CORRCOV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum corrcov_status {
  CORRCOV_OK = 0,
  CORRCOV_E_DIMENSION_MISMATCH = 1,
  CORRCOV_E_NOT_POSITIVE_DEFINITE = 2,
  CORRCOV_E_NOT_SYMMETRIC = 3,
  CORRCOV_E_NON_FINITE = 4,
  CORRCOV_E_CONVERGENCE_FAILURE = 5,
  CORRCOV_E_ORACLE_SIZE_EXCEEDED = 6,
  CORRCOV_E_INVALID_MODEL = 7,
  CORRCOV_E_NO_ANALYTIC_FORM = 8,
  CORRCOV_E_INVALID_INPUTS = 9,
  CORRCOV_E_CAP_EXCEEDED = 10,
  CORRCOV_E_INVALID_CONFIG = 11,
  CORRCOV_E_PARSE = 12,
  CORRCOV_E_IO = 13,
  CORRCOV_E_NULL_ARGUMENT = 14,
  CORRCOV_E_INTERNAL = 15
} corrcov_status;

typedef struct corrcov_model corrcov_model;
typedef struct corrcov_experiment corrcov_experiment;

typedef struct corrcov_norms {
  double trace;
  double frobenius;
  double spectral;
  int exact; /* 0 when frobenius or spectral is an upper bound */
} corrcov_norms;

/* Called once per finished grid cell; may run on a worker thread. */
typedef void (*corrcov_progress_fn)(const char* line, void* user);

CORRCOV_API const char* corrcov_version(void);
CORRCOV_API const char* corrcov_status_name(corrcov_status status);
/* Message of the last failed call on this thread; "" if none. */
CORRCOV_API const char* corrcov_last_error(void);

CORRCOV_API void corrcov_string_free(char* s);
CORRCOV_API void corrcov_buffer_free(double* p);

/* Descriptor: identity | toeplitz:<theta> | all_ones | random_diag:<mu>,<sigma>.
 * The seed only affects random_diag. */
CORRCOV_API corrcov_status corrcov_model_create(const char* descriptor, size_t m, uint64_t seed,
                                                corrcov_model** out);
CORRCOV_API void corrcov_model_destroy(corrcov_model* model);
CORRCOV_API corrcov_status corrcov_model_m(const corrcov_model* model, size_t* out);
CORRCOV_API corrcov_status corrcov_model_norms(const corrcov_model* model, int analytic, corrcov_norms* out);
/* m*m row-major copies of B and Lambda; free with corrcov_buffer_free. */
CORRCOV_API corrcov_status corrcov_model_b(const corrcov_model* model, double** out);
CORRCOV_API corrcov_status corrcov_model_lambda(const corrcov_model* model, double** out);

typedef struct corrcov_bound_request {
  size_t n;
  size_t m;
  const char* model;      /* descriptor */
  uint64_t seed;          /* random_diag draw */
  const double* sigma;    /* n*n row-major covariance, or NULL */
  const char* sigma_path; /* JSON array of rows, used when sigma is NULL; NULL means identity */
  int has_delta;          /* 0 picks the delta whose tail probability bound is 0.05 */
  double delta;
  int analytic;           /* closed-form norms instead of norms of B */
  int has_paulin;         /* evaluate the Paulin comparison with the two values below */
  double paulin_l;
  double paulin_entry_sigma;
} corrcov_bound_request;

/* Bound report as a JSON object; free with corrcov_string_free. */
CORRCOV_API corrcov_status corrcov_bound_json(const corrcov_bound_request* request, char** out_json);

CORRCOV_API corrcov_status corrcov_experiment_load(const char* path, corrcov_experiment** out);
CORRCOV_API corrcov_status corrcov_experiment_parse(const char* json_text, corrcov_experiment** out);
CORRCOV_API void corrcov_experiment_destroy(corrcov_experiment* exp);
CORRCOV_API corrcov_status corrcov_experiment_set_seed(corrcov_experiment* exp, uint64_t seed);
CORRCOV_API corrcov_status corrcov_experiment_set_trials(corrcov_experiment* exp, size_t trials);
/* Runs the experiment and writes CSV, SVG and JSON into out_dir (when not
 * NULL). out_json, when not NULL, receives the result JSON. */
CORRCOV_API corrcov_status corrcov_experiment_run(corrcov_experiment* exp, const char* out_dir, unsigned threads,
                                                  corrcov_progress_fn progress, void* user, char** out_json);
/* Warnings of the last run (e.g. censoring above 1%). */
CORRCOV_API size_t corrcov_experiment_warning_count(const corrcov_experiment* exp);
CORRCOV_API const char* corrcov_experiment_warning(const corrcov_experiment* exp, size_t index);

/* All three published experiments at the given trial scale in (0, 1]. The
 * summary JSON (also written to out_dir/summary.json) lists fitted slopes,
 * bound checks and warnings. */
CORRCOV_API corrcov_status corrcov_reproduce_paper(const char* out_dir, uint64_t seed, double scale,
                                                   unsigned threads, corrcov_progress_fn progress, void* user,
                                                   char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif
