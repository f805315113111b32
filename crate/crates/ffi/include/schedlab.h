#ifndef SCHEDLAB_H
#define SCHEDLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pass as a machine count to mean `m = ∞`.
 */
#define SCHEDLAB_INFINITE_MACHINES 0

typedef enum SchedlabStatus {
  SCHEDLAB_STATUS_OK = 0,
  SCHEDLAB_STATUS_NULL_POINTER = 1,
  SCHEDLAB_STATUS_INVALID_ARGUMENT = 2,
  SCHEDLAB_STATUS_PARSE = 3,
  SCHEDLAB_STATUS_SIZE = 4,
  SCHEDLAB_STATUS_DOMAIN = 5,
  SCHEDLAB_STATUS_INTERNAL = 6,
} SchedlabStatus;

/**
 * Deterministic instance handle.
 */
typedef struct SchedlabInstance SchedlabInstance;

/**
 * Stochastic instance handle.
 */
typedef struct SchedlabStochastic SchedlabStochastic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *schedlab_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *schedlab_version(void);

/**
 * Builds an instance from `n` weights and processing times. Job ids are `j1..jn`.
 *
 * # Safety
 * `weights` and `ptimes` must point to `n` readable doubles; `out` must be writable.
 */
enum SchedlabStatus schedlab_instance_new(size_t machines,
                                          const double *weights,
                                          const double *ptimes,
                                          size_t n,
                                          struct SchedlabInstance **out);

/**
 * Parses a deterministic instance file.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SchedlabStatus schedlab_instance_from_json(const char *json, struct SchedlabInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be freed twice. Null is ignored.
 */
void schedlab_instance_free(struct SchedlabInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SchedlabStatus schedlab_instance_len(const struct SchedlabInstance *inst, size_t *out);

/**
 * `Σ w_j C_j(α)` of the WSPT schedule, ties in input order.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SchedlabStatus schedlab_wspt_objective(const struct SchedlabInstance *inst,
                                            double alpha,
                                            double *out);

/**
 * Exact optimum of `Σ w_j C_j(α)`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SchedlabStatus schedlab_optimal_objective(const struct SchedlabInstance *inst,
                                               double alpha,
                                               double *out);

/**
 * WSPT/OPT ratio and the applicable bound. `worst_ties` takes the worst order
 * within equal Smith ratios.
 *
 * # Safety
 * `inst` must be a live handle; `out_ratio` and `out_bound` must be writable.
 */
enum SchedlabStatus schedlab_wspt_ratio(const struct SchedlabInstance *inst,
                                        double alpha,
                                        bool worst_ties,
                                        double *out_ratio,
                                        double *out_bound);

/**
 * Evaluates a bound formula by id (`kk`, `msu`, `wsept-red`, ...). Parameters
 * the formula does not use are ignored.
 *
 * # Safety
 * `formula` must be a NUL-terminated string; `out` must be writable.
 */
enum SchedlabStatus schedlab_bound(const char *formula,
                                   size_t m,
                                   double delta,
                                   double alpha,
                                   double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SchedlabStatus schedlab_wspt_m(size_t m, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SchedlabStatus schedlab_k_m(size_t m, size_t *out);

/**
 * Parses an instance file; deterministic files become point masses.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SchedlabStatus schedlab_stochastic_from_json(const char *json,
                                                  struct SchedlabStochastic **out);

/**
 * # Safety
 * `inst` must come from this library and not be freed twice. Null is ignored.
 */
void schedlab_stochastic_free(struct SchedlabStochastic *inst);

/**
 * Largest squared coefficient of variation over the jobs.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SchedlabStatus schedlab_stochastic_delta(const struct SchedlabStochastic *inst, double *out);

/**
 * Exact expected WSEPT objective for finite-support laws.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SchedlabStatus schedlab_exact_wsept_value(const struct SchedlabStochastic *inst, double *out);

/**
 * Optimal expected objective over non-anticipative policies.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum SchedlabStatus schedlab_mdp_optimal(const struct SchedlabStochastic *inst, double *out);

/**
 * Monte Carlo estimate of the expected WSEPT `α`-point objective with its 95% half-width.
 *
 * # Safety
 * `inst` must be a live handle; `out_mean` and `out_half_width` must be writable.
 */
enum SchedlabStatus schedlab_monte_carlo(const struct SchedlabStochastic *inst,
                                         size_t samples,
                                         uint64_t seed,
                                         double alpha,
                                         double *out_mean,
                                         double *out_half_width);

/**
 * Evaluates an instance file with the exact oracle and returns the JSON report.
 * Free the string with [`schedlab_string_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SchedlabStatus schedlab_evaluate_json(const char *json,
                                           double alpha,
                                           size_t samples,
                                           uint64_t seed,
                                           char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void schedlab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHEDLAB_H */
