#ifndef AMOU_KTHEORY_H
#define AMOU_KTHEORY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define AMOU_SELFADJOINT 1

#define AMOU_POSITIVE (1 << 1)

#define AMOU_ORDER_PROJECTION (1 << 2)

#define AMOU_PARTIAL_ISOMETRY (1 << 3)

#define AMOU_UNITARY (1 << 4)

#define AMOU_PARTIAL_UNITARY (1 << 5)

typedef enum AmouGroup {
  AMOU_GROUP_K0 = 0,
  AMOU_GROUP_K1 = 1,
  AMOU_GROUP_K = 2,
} AmouGroup;

typedef enum AmouStatus {
  AMOU_STATUS_OK = 0,
  AMOU_STATUS_NULL_ARGUMENT = 1,
  AMOU_STATUS_PARSE_ERROR = 2,
  AMOU_STATUS_SHAPE_MISMATCH = 3,
  AMOU_STATUS_UNSUPPORTED = 4,
  /**
   * An input failed the predicate an operation requires.
   */
  AMOU_STATUS_DOMAIN_ERROR = 5,
  AMOU_STATUS_NUMERICAL = 6,
  AMOU_STATUS_PANIC = 7,
} AmouStatus;

/**
 * A model algebra.
 */
typedef struct AmouAlgebra AmouAlgebra;

/**
 * A matrix element over a model algebra.
 */
typedef struct AmouElement AmouElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *amou_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void amou_string_free(char *s);

/**
 * Parses `fd:d1,d2,...`, `circle:dim:grid` or an inline JSON algebra.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` writable.
 */
enum AmouStatus amou_algebra_parse(const char *spec, struct AmouAlgebra **out);

/**
 * # Safety
 * `alg` must be null or a handle from [`amou_algebra_parse`], not yet freed.
 */
void amou_algebra_free(struct AmouAlgebra *alg);

/**
 * Parses an element from its JSON form.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum AmouStatus amou_element_from_json(const char *json, struct AmouElement **out);

/**
 * The unit at level `level`.
 *
 * # Safety
 * `alg` must be a live algebra handle and `out` writable.
 */
enum AmouStatus amou_element_unit(const struct AmouAlgebra *alg,
                                  size_t level,
                                  struct AmouElement **out);

/**
 * # Safety
 * `v` must be null or an element handle from this library, not yet freed.
 */
void amou_element_free(struct AmouElement *v);

/**
 * Serializes an element; free the result with [`amou_string_free`].
 *
 * # Safety
 * `v` must be a live element handle and `out` writable.
 */
enum AmouStatus amou_element_to_json(const struct AmouElement *v, char **out);

/**
 * `|v|`.
 *
 * # Safety
 * `v` must be a live element handle and `out` writable.
 */
enum AmouStatus amou_element_abs(const struct AmouElement *v, struct AmouElement **out);

/**
 * The order-unit norm, bracketed to `tol_bisect`.
 *
 * # Safety
 * `v` must be a live element handle and `out` writable.
 */
enum AmouStatus amou_element_norm(const struct AmouElement *v, double tol_bisect, double *out);

/**
 * Membership bits (`AMOU_SELFADJOINT`, ...) of a square element at tolerance `tol`.
 *
 * # Safety
 * `v` must be a live element handle and `out` writable.
 */
enum AmouStatus amou_element_classify(const struct AmouElement *v, double tol, uint32_t *out);

/**
 * Murray-von Neumann equivalence of two order projections.
 *
 * # Safety
 * `p` and `q` must be live element handles and `out` writable.
 */
enum AmouStatus amou_mvn_equivalent(const struct AmouElement *p,
                                    const struct AmouElement *q,
                                    bool *out);

/**
 * Stabilized homotopy of two unitaries.
 *
 * # Safety
 * `u` and `v` must be live element handles and `out` writable.
 */
enum AmouStatus amou_sim1_equivalent(const struct AmouElement *u,
                                     const struct AmouElement *v,
                                     bool *out);

/**
 * Stabilized homotopy of two partial unitaries.
 *
 * # Safety
 * `u` and `v` must be live element handles and `out` writable.
 */
enum AmouStatus amou_simk_equivalent(const struct AmouElement *u,
                                     const struct AmouElement *v,
                                     bool *out);

/**
 * The ordered group as JSON; free the result with [`amou_string_free`].
 *
 * # Safety
 * `alg` must be a live algebra handle and `out` writable.
 */
enum AmouStatus amou_kgroup_json(const struct AmouAlgebra *alg, enum AmouGroup which, char **out);

/**
 * Runs the property suites and returns the JSON report; `exit_code` receives
 * the command-line exit code the same run would produce.
 *
 * # Safety
 * `alg` must be a live algebra handle; `out` and `exit_code` writable.
 */
enum AmouStatus amou_check_axioms_json(const struct AmouAlgebra *alg,
                                       uint64_t seed,
                                       uint64_t trials,
                                       char **out,
                                       int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AMOU_KTHEORY_H */
