#ifndef SYMBELL_H
#define SYMBELL_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SymbellStatus {
  SYMBELL_STATUS_OK = 0,
  SYMBELL_STATUS_NULL_POINTER = 1,
  SYMBELL_STATUS_PRECONDITION = 2,
  SYMBELL_STATUS_TOO_LARGE = 3,
  SYMBELL_STATUS_PARITY = 4,
  SYMBELL_STATUS_OUT_OF_RANGE = 5,
  SYMBELL_STATUS_OVERFLOW = 6,
  SYMBELL_STATUS_CONSISTENCY = 7,
  SYMBELL_STATUS_NON_CONVERGENCE = 8,
  SYMBELL_STATUS_INTERNAL = 9,
} SymbellStatus;

/**
 * Opaque facet list.
 */
typedef struct SymbellFacetList SymbellFacetList;

/**
 * Coefficients of `alpha S0 + beta S1 + gamma/2 S00 + delta S01 + epsilon/2 S11`.
 */
typedef struct SymbellCoefficients {
  int64_t alpha;
  int64_t beta;
  int64_t gamma;
  int64_t delta;
  int64_t epsilon;
} SymbellCoefficients;

/**
 * `coefficients . S + beta_c >= 0` for `n` parties.
 */
typedef struct SymbellInequality {
  uint32_t n;
  struct SymbellCoefficients coefficients;
  int64_t beta_c;
} SymbellInequality;

typedef struct SymbellViolation {
  uint32_t n;
  double theta_star;
  double lambda_min;
  double beta_c;
  double effective_violation;
  bool violated;
} SymbellViolation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *symbell_version(void);

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *symbell_last_error(void);

/**
 * Enumerates all facets for `n` parties into a new list stored in `*out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum SymbellStatus symbell_facets_compute(uint32_t n, struct SymbellFacetList **out);

/**
 * Number of facets in `list` (0 for NULL).
 *
 * # Safety
 * `list` must be NULL or a live handle from [`symbell_facets_compute`].
 */
size_t symbell_facets_count(const struct SymbellFacetList *list);

/**
 * Copies facet `index` of `list` into `*out`.
 *
 * # Safety
 * `list` must be a live handle and `out` a valid writable pointer.
 */
enum SymbellStatus symbell_facets_get(const struct SymbellFacetList *list,
                                      size_t index,
                                      struct SymbellInequality *out);

/**
 * Releases a facet list. NULL is ignored.
 *
 * # Safety
 * `list` must be NULL or a handle from [`symbell_facets_compute`] that has
 * not been freed.
 */
void symbell_facets_free(struct SymbellFacetList *list);

/**
 * Exact classical bound `*num / *den` (`den` is 1 or 2).
 *
 * # Safety
 * All pointers must be valid; `coefficients` readable, `num` and `den` writable.
 */
enum SymbellStatus symbell_classical_bound(const struct SymbellCoefficients *coefficients,
                                           uint32_t n,
                                           int64_t *num,
                                           int64_t *den);

/**
 * Minimizes the smallest eigenvalue of the Bell operator over the angle.
 *
 * # Safety
 * `inequality` must be readable and `out` writable.
 */
enum SymbellStatus symbell_optimize_theta(const struct SymbellInequality *inequality,
                                          struct SymbellViolation *out);

/**
 * Analytic violation of the Dicke-class inequality by `|D_n^{ceil(n/2)}>`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SymbellStatus symbell_dicke_violation(uint32_t n, struct SymbellViolation *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMBELL_H */
