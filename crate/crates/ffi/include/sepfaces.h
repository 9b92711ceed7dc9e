#ifndef SEPFACES_H
#define SEPFACES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_UTF8 = 2,
  SF_STATUS_PARSE = 3,
  SF_STATUS_DIMENSION = 4,
  SF_STATUS_DOMAIN = 5,
  SF_STATUS_DEGENERATE = 6,
  SF_STATUS_UNSUPPORTED = 7,
  SF_STATUS_NUMERICAL = 8,
  SF_STATUS_PANIC = 9,
  SF_STATUS_OTHER = 10,
} SfStatus;

/**
 * Opaque handle to a Hermitian operator on `C^m (x) C^n`.
 */
typedef struct SfOperator SfOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void sf_string_free(char *s);

/**
 * Parses `{"m":..,"n":..,"entries":[[re,im],..]}`; the matrix must be
 * Hermitian.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be writable.
 */
enum SfStatus sf_operator_from_json(const char *json, struct SfOperator **out);

/**
 * # Safety
 * `op` must be NULL or a handle from this library that has not been freed.
 */
void sf_operator_free(struct SfOperator *op);

/**
 * # Safety
 * `op` must be a live handle; `m` and `n` must be writable.
 */
enum SfStatus sf_operator_dims(const struct SfOperator *op, size_t *m, size_t *n);

/**
 * # Safety
 * `op` must be a live handle; `out` must be writable. Free the result with
 * `sf_string_free`.
 */
enum SfStatus sf_operator_to_json(const struct SfOperator *op, char **out);

/**
 * Numerical rank; `rank_rel_tol <= 0` selects the default cutoff.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_operator_rank(const struct SfOperator *op, double rank_rel_tol, size_t *out);

/**
 * `(rank rho, rank rho^Gamma)`.
 *
 * # Safety
 * `op` must be a live handle; `p` and `q` must be writable.
 */
enum SfStatus sf_operator_state_type(const struct SfOperator *op, size_t *p, size_t *q);

/**
 * # Safety
 * `op` must be a live handle; `out` must be writable. The new handle is
 * owned by the caller.
 */
enum SfStatus sf_operator_partial_transpose(const struct SfOperator *op, struct SfOperator **out);

/**
 * Fails with `Domain` if the operator is not a density matrix.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_operator_is_ppt(const struct SfOperator *op, bool *out);

/**
 * Largest `eps` with `sigma - eps rho0` still PPT.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum SfStatus sf_max_epsilon_ppt(const struct SfOperator *sigma,
                                 const struct SfOperator *rho0,
                                 double *out);

/**
 * Full edge extraction report as JSON.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum SfStatus sf_extract_edge_json(const struct SfOperator *sigma,
                                   const struct SfOperator *rho0,
                                   uint64_t seed,
                                   char **out);

/**
 * Face certificate for a JSON list of product vectors
 * `[{"x":[[re,im],..],"y":[..]},..]`.
 *
 * # Safety
 * `family_json` must be a valid NUL-terminated string; `out` must be
 * writable.
 */
enum SfStatus sf_certify_json(const char *family_json, uint64_t seed, char **out);

/**
 * Product vectors in a subspace, in the span of a family, or in the kernel
 * (`use_range = false`) or range of an operator; returns the report line.
 *
 * # Safety
 * `input_json` must be a valid NUL-terminated string; `out` must be
 * writable.
 */
enum SfStatus sf_find_products_json(const char *input_json,
                                    bool use_range,
                                    uint64_t seed,
                                    char **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_gallery_rho_b(double b, struct SfOperator **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_gallery_rho_theta(double b, double theta, struct SfOperator **out);

/**
 * Uniform mixture of the six kernel product vectors of `rho_b(b)`,
 * optionally leaving out member `skip` (0-based; pass a negative value to
 * keep all six).
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_gallery_choi_face_state(double b, int32_t skip, struct SfOperator **out);

/**
 * Any named gallery object as JSON (see the command-line `gallery` command
 * for the names).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be writable.
 */
enum SfStatus sf_gallery_json(const char *name, double b, double theta, double s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEPFACES_H */
