#ifndef TSINGULAR_H
#define TSINGULAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum TsgStatus {
  TSG_STATUS_OK = 0,
  TSG_STATUS_NULL_POINTER = 1,
  TSG_STATUS_INVALID_ARGUMENT = 2,
  TSG_STATUS_TOO_LARGE = 3,
  TSG_STATUS_SEPARATION_VIOLATION = 4,
  TSG_STATUS_PANIC = 5,
} TsgStatus;

/**
 * A finite field GF(q).
 */
typedef struct TsgField TsgField;

/**
 * A subspace of GF(q)^n in canonical form.
 */
typedef struct TsgSubspace TsgSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *tsg_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tsg_string_free(char *s);

/**
 * GF(q) with the default defining polynomial.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum TsgStatus tsg_field_new(uint64_t q, struct TsgField **out);

/**
 * Frees a field. Null is ignored.
 *
 * # Safety
 * `field` must come from [`tsg_field_new`] and not have been freed.
 */
void tsg_field_free(struct TsgField *field);

/**
 * The order q, or 0 for null.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint32_t tsg_field_order(const struct TsgField *field);

/**
 * Row space of a `rows x cols` matrix given row-major as element codes.
 *
 * # Safety
 * `codes` must point to `rows * cols` readable values (it may be null when
 * that product is 0); `out` must be valid for writes.
 */
enum TsgStatus tsg_subspace_from_codes(const struct TsgField *field,
                                       uintptr_t rows,
                                       uintptr_t cols,
                                       const uint32_t *codes,
                                       struct TsgSubspace **out);

/**
 * The canonical representative of subspaces of `type` for `shape`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_canonical(const struct TsgField *field,
                             const char *shape,
                             const char *ty,
                             struct TsgSubspace **out);

/**
 * Frees a subspace. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tsg_subspace_free(struct TsgSubspace *s);

/**
 * Dimension of `s`, or 0 for null.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
uintptr_t tsg_subspace_dim(const struct TsgSubspace *s);

/**
 * The reduced basis as text: rows on separate lines, codes separated by
 * spaces.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum TsgStatus tsg_subspace_text(const struct TsgSubspace *s, char **out);

/**
 * The type of `s` for `shape`, as `"k1,...,kt"`.
 *
 * # Safety
 * `shape` must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_type_of(const struct TsgSubspace *s, const char *shape, char **out);

/**
 * Gaussian binomial coefficient.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum TsgStatus tsg_gauss(int64_t n, int64_t k, uint64_t q, char **out);

/**
 * Number of `m x n` matrices of rank `i`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum TsgStatus tsg_count_rank_matrices(int64_t i, int64_t m, int64_t n, uint64_t q, char **out);

/**
 * Order of the block upper-triangular group for `shape`.
 *
 * # Safety
 * `shape` must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_group_order(const char *shape, uint64_t q, char **out);

/**
 * Number of subspaces of `type` for `shape`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_anzahl(const char *shape, const char *ty, uint64_t q, char **out);

/**
 * Number of `sub_type` subspaces inside a fixed subspace of `type`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_count_contained(const char *shape,
                                   const char *ty,
                                   const char *sub_type,
                                   uint64_t q,
                                   char **out);

/**
 * Number of subspaces of `type` containing a fixed subspace of `sub_type`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_count_containing(const char *shape,
                                    const char *ty,
                                    const char *sub_type,
                                    uint64_t q,
                                    char **out);

/**
 * The printed suborbit count for a three-block shape.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid for writes.
 */
enum TsgStatus tsg_suborbit_count_printed(const char *shape,
                                          const char *ty,
                                          uint64_t q,
                                          char **out);

/**
 * Compares the printed suborbit formulas with brute force and writes the
 * report as JSON. `guard` caps both the group order and the number of
 * subspaces; 0 selects the defaults.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out_json` must be valid for
 * writes.
 */
enum TsgStatus tsg_cross_validate(const struct TsgField *field,
                                  const char *shape,
                                  const char *ty,
                                  uint64_t guard,
                                  char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSINGULAR_H */
