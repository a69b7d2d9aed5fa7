#ifndef BELLKIT_H
#define BELLKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum BellStatus {
  BELL_STATUS_OK = 0,
  BELL_STATUS_NULL_POINTER = 1,
  BELL_STATUS_INVALID_ARGUMENT = 2,
  BELL_STATUS_DIMENSION = 3,
  BELL_STATUS_TOO_LARGE = 4,
  BELL_STATUS_MISSING_BOUND = 5,
  BELL_STATUS_UNKNOWN_NAME = 6,
  BELL_STATUS_NO_VIOLATION = 7,
  BELL_STATUS_PARSE = 8,
  BELL_STATUS_IO = 9,
  BELL_STATUS_PANIC = 10,
} BellStatus;

typedef enum BellSpace {
  BELL_SPACE_FULL = 0,
  BELL_SPACE_CORRELATION = 1,
} BellSpace;

/**
 * Opaque inequality handle.
 */
typedef struct BellInequality BellInequality;

/**
 * Facet certification summary.
 */
typedef struct BellFacetReport {
  bool is_facet;
  size_t polytope_dim;
  size_t affine_rank;
  size_t saturating_vertices;
} BellFacetReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call on the same thread.
 */
const char *bell_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void bell_string_free(char *s);

/**
 * # Safety
 * `h` must be null or a handle returned by this library, freed at most once.
 */
void bell_inequality_free(struct BellInequality *h);

/**
 * Look up a built-in inequality (case-insensitive).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum BellStatus bell_catalog(const char *name, struct BellInequality **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BellStatus bell_gen_as(size_t n, struct BellInequality **out);

/**
 * # Safety
 * `row` must point to `len` integers; `out` must be writable.
 */
enum BellStatus bell_gen_d(const int64_t *row, size_t len, struct BellInequality **out);

/**
 * Parse the JSON inequality format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BellStatus bell_from_json(const char *json, struct BellInequality **out);

/**
 * Serialize to JSON; release the result with [`bell_string_free`].
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum BellStatus bell_to_json(const struct BellInequality *h, char **out);

/**
 * Inputs per party.
 *
 * # Safety
 * `h` must be a live handle; outputs must be writable.
 */
enum BellStatus bell_inequality_inputs(const struct BellInequality *h, size_t *m_a, size_t *m_b);

/**
 * Exact local bound by enumeration, as a reduced fraction.
 *
 * # Safety
 * `h` must be a live handle; outputs must be writable.
 */
enum BellStatus bell_local_bound(const struct BellInequality *h, int64_t *numer, int64_t *denom);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum BellStatus bell_facet_check(const struct BellInequality *h,
                                 enum BellSpace space,
                                 struct BellFacetReport *out);

/**
 * Best see-saw value over unit vectors in `dim` dimensions. `restarts = 0`
 * picks the default for the inequality size.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum BellStatus bell_seesaw_value(const struct BellInequality *h,
                                  size_t dim,
                                  size_t restarts,
                                  uint64_t seed,
                                  double *out);

/**
 * Critical white-noise visibility.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum BellStatus bell_visibility_threshold(const struct BellInequality *h,
                                          size_t dim,
                                          size_t restarts,
                                          uint64_t seed,
                                          double *out);

/**
 * Detection-efficiency threshold for `cos θ|00> + sin θ|11>`. With
 * `symmetric` both efficiencies are equal; otherwise Bob's is `eta_b`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum BellStatus bell_detection_threshold(const struct BellInequality *h,
                                         double theta,
                                         bool symmetric,
                                         double eta_b,
                                         uint64_t seed,
                                         double *out);

/**
 * Exhaustive local optimum of the guessing game.
 *
 * # Safety
 * `out` must be writable.
 */
enum BellStatus bell_shb_local_oracle(size_t n, size_t m, int64_t *out);

/**
 * Score of the two-input quantum strategy with alphabet size `m`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BellStatus bell_shb_quantum_score(size_t m, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLKIT_H */
