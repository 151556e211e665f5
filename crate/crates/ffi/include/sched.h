/* C interface to the sched scheduling solver. */

#ifndef SCHED_H
#define SCHED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SchedStatus {
  SchedStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  SchedStatus_NullArgument = 1,
  /**
   * Input text was not valid UTF-8.
   */
  SchedStatus_InvalidUtf8 = 2,
  /**
   * The instance text did not parse.
   */
  SchedStatus_ParseError = 3,
  /**
   * The instance violates a model invariant (cycle, bad value, size).
   */
  SchedStatus_InvalidInstance = 4,
  /**
   * The LP or scheduling stage failed numerically.
   */
  SchedStatus_SolverFailure = 5,
  /**
   * An internal panic was caught; state may be inconsistent.
   */
  SchedStatus_Panic = 6,
} SchedStatus;

/**
 * Opaque scheduling instance.
 */
typedef struct SchedInstance SchedInstance;

/**
 * Opaque solve report (LP bound, schedules, ratios).
 */
typedef struct SchedReport SchedReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *sched_version(void);

/**
 * Message for the most recent error on this thread, or null. The caller
 * owns the returned string.
 */
char *sched_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by a `sched_*` function that
 * documents string ownership, and must not be used afterwards.
 */
void sched_string_free(char *s);

/**
 * Parses and validates an instance from its text form.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to writable
 * pointer storage.
 */
enum SchedStatus sched_instance_parse(const char *text, struct SchedInstance **out);

/**
 * Generates a seeded random instance (see the CLI `gen` command).
 *
 * # Safety
 * `out` must point to writable pointer storage.
 */
enum SchedStatus sched_instance_generate(size_t n,
                                         uint64_t p_max,
                                         uint64_t r_max,
                                         uint64_t w_max,
                                         double edge_prob,
                                         uint64_t seed,
                                         struct SchedInstance **out);

/**
 * Canonical text form of the instance; the caller owns the string.
 * Returns null on a null handle.
 *
 * # Safety
 * `inst` must be a live handle from this library or null.
 */
char *sched_instance_serialize(const struct SchedInstance *inst);

/**
 * Number of jobs, or 0 on a null handle.
 *
 * # Safety
 * `inst` must be a live handle from this library or null.
 */
size_t sched_instance_job_count(const struct SchedInstance *inst);

/**
 * Releases an instance handle.
 *
 * # Safety
 * `inst` must be a handle from this library, not yet freed, or null.
 */
void sched_instance_free(struct SchedInstance *inst);

/**
 * Runs the full pipeline (LP bound, double-speed preemptive schedule,
 * derandomized alpha conversion) with the given separation tolerance;
 * pass `tol_sep <= 0` for the default.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` writable storage.
 */
enum SchedStatus sched_solve(const struct SchedInstance *inst,
                             double tol_sep,
                             struct SchedReport **out);

/**
 * Optimal total weighted completion time by brute force; fails with
 * `INVALID_INSTANCE` beyond `n_limit` jobs (pass 0 for the default 10).
 *
 * # Safety
 * `inst` must be a live instance handle and `out_cost` writable.
 */
enum SchedStatus sched_exact_optimum(const struct SchedInstance *inst,
                                     size_t n_limit,
                                     double *out_cost);

/**
 * LP lower bound of the solved instance, or NaN on a null handle.
 *
 * # Safety
 * `report` must be a live report handle or null.
 */
double sched_report_lp_bound(const struct SchedReport *report);

/**
 * Cost of the double-speed preemptive list schedule, or NaN.
 *
 * # Safety
 * `report` must be a live report handle or null.
 */
double sched_report_pmtn_cost(const struct SchedReport *report);

/**
 * Cost of the derandomized nonpreemptive schedule, or NaN.
 *
 * # Safety
 * `report` must be a live report handle or null.
 */
double sched_report_alg_cost(const struct SchedReport *report);

/**
 * Exact expected cost of the randomized conversion, or NaN.
 *
 * # Safety
 * `report` must be a live report handle or null.
 */
double sched_report_expected_cost(const struct SchedReport *report);

/**
 * Alpha value the derandomized search settled on, or NaN.
 *
 * # Safety
 * `report` must be a live report handle or null.
 */
double sched_report_best_alpha(const struct SchedReport *report);

/**
 * Full report as a JSON document; the caller owns the string. Returns
 * null on a null handle.
 *
 * # Safety
 * `report` must be a live report handle or null.
 */
char *sched_report_to_json(const struct SchedReport *report);

/**
 * Releases a report handle.
 *
 * # Safety
 * `report` must be a handle from this library, not yet freed, or null.
 */
void sched_report_free(struct SchedReport *report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SCHED_H */
