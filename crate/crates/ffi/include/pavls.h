#ifndef PAVLS_H
#define PAVLS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum PavlsStatus {
  PAVLS_STATUS_OK = 0,
  PAVLS_STATUS_NULL_POINTER = 1,
  PAVLS_STATUS_INVALID_UTF8 = 2,
  PAVLS_STATUS_PARSE = 3,
  PAVLS_STATUS_INVALID_ARGUMENT = 4,
  PAVLS_STATUS_OUT_OF_RANGE = 5,
  PAVLS_STATUS_PANIC = 6,
} PavlsStatus;

/**
 * Values of the `rule` argument of [`pavls_run`].
 */
typedef enum PavlsRule {
  PAVLS_RULE_LEX_BETTER = 0,
  PAVLS_RULE_BEST = 1,
} PavlsRule;

/**
 * Opaque election handle.
 */
typedef struct PavlsElection PavlsElection;

/**
 * Opaque run-trace handle.
 */
typedef struct PavlsTrace PavlsTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *pavls_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void pavls_string_free(char *s);

/**
 * Parses an election in the native text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PavlsStatus pavls_election_parse_native(const char *text, struct PavlsElection **out);

/**
 * Builds the warm-up instance for committee size `k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PavlsStatus pavls_election_warmup(size_t k, struct PavlsElection **out);

/**
 * # Safety
 * `e` must be NULL or a handle from this library and not yet freed.
 */
void pavls_election_free(struct PavlsElection *e);

/**
 * Number of candidates, or 0 for NULL.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
size_t pavls_election_candidate_count(const struct PavlsElection *e);

/**
 * Committee size, or 0 for NULL.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
size_t pavls_election_committee_size(const struct PavlsElection *e);

/**
 * Serialises the election in the native format into `*out`.
 *
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum PavlsStatus pavls_election_serialize_native(const struct PavlsElection *e, char **out);

/**
 * PAV score of a committee. The exact value is written to `*fraction` as
 * `num/den` (freed with [`pavls_string_free`]); either out-parameter may
 * be NULL.
 *
 * # Safety
 * `e` must be a live handle; `members` must point to `len` readable values.
 */
enum PavlsStatus pavls_score(const struct PavlsElection *e,
                             const size_t *members,
                             size_t len,
                             char **fraction,
                             double *approx);

/**
 * Runs local search with ε = 0⁺ from the given committee. `rule` is a
 * [`PavlsRule`] value; `step_cap` of 0 means unbounded.
 *
 * # Safety
 * `e` must be a live handle; `start` must point to `len` readable values;
 * `out` must be writable.
 */
enum PavlsStatus pavls_run(const struct PavlsElection *e,
                           const size_t *start,
                           size_t len,
                           uint32_t rule,
                           size_t step_cap,
                           struct PavlsTrace **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library and not yet freed.
 */
void pavls_trace_free(struct PavlsTrace *t);

/**
 * # Safety
 * `t` must be NULL or a live handle.
 */
size_t pavls_trace_swap_count(const struct PavlsTrace *t);

/**
 * Total Δ evaluations, including the final scan.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
uint64_t pavls_trace_comparisons(const struct PavlsTrace *t);

/**
 * Whether the run ended at a local optimum rather than the step cap.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
bool pavls_trace_terminated(const struct PavlsTrace *t);

/**
 * Writes swap `index` as `(*out, *add)`.
 *
 * # Safety
 * `t` must be a live handle; `out` and `add` must be writable.
 */
enum PavlsStatus pavls_trace_swap(const struct PavlsTrace *t,
                                  size_t index,
                                  size_t *out,
                                  size_t *add);

/**
 * Copies the final committee into `buf` when `cap` is large enough and
 * returns its size either way (0 for NULL).
 *
 * # Safety
 * `t` must be NULL or a live handle; `buf` must have room for `cap` values.
 */
size_t pavls_trace_final_committee(const struct PavlsTrace *t, size_t *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAVLS_H */
