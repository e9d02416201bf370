#ifndef RMTEST_H
#define RMTEST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RmtStatus {
  RMT_STATUS_OK = 0,
  RMT_STATUS_NULL_POINTER = 1,
  RMT_STATUS_INVALID_ARGUMENT = 2,
  RMT_STATUS_FIELD_ERROR = 3,
  RMT_STATUS_PARSE_ERROR = 4,
  RMT_STATUS_NOT_FOUND = 5,
  RMT_STATUS_RUNTIME_ERROR = 6,
  RMT_STATUS_PANIC = 7,
} RmtStatus;

/**
 * A finite field `F_q`.
 */
typedef struct RmtField RmtField;

/**
 * A sparse multivariate polynomial over some `F_q`.
 */
typedef struct RmtPolynomial RmtPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next failing call.
 */
const char *rmt_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rmt_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void rmt_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum RmtStatus rmt_field_new(uint32_t p, uint32_t ell, struct RmtField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from `rmt_field_new` not yet freed.
 */
void rmt_field_free(struct RmtField *field);

/**
 * `q`, or 0 for a NULL handle.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
uint32_t rmt_field_order(const struct RmtField *field);

/**
 * # Safety
 * `field` must be NULL or a live handle.
 */
uint32_t rmt_field_characteristic(const struct RmtField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_field_add(const struct RmtField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_field_sub(const struct RmtField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_field_mul(const struct RmtField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * Fails with `InvalidArgument` for `a = 0`.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_field_inv(const struct RmtField *field, uint32_t a, uint32_t *out);

/**
 * `a^e` with `0^0 = 1`.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_field_pow(const struct RmtField *field, uint32_t a, uint64_t e, uint32_t *out);

/**
 * Parses the text format `q=<q> n=<n>; <terms>`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum RmtStatus rmt_poly_parse(const char *text, struct RmtPolynomial **out);

/**
 * # Safety
 * `poly` must be NULL or a handle from `rmt_poly_parse` not yet freed.
 */
void rmt_poly_free(struct RmtPolynomial *poly);

/**
 * Number of variables, or 0 for a NULL handle.
 *
 * # Safety
 * `poly` must be NULL or a live handle.
 */
size_t rmt_poly_arity(const struct RmtPolynomial *poly);

/**
 * Total degree; -1 for the zero polynomial or a NULL handle.
 *
 * # Safety
 * `poly` must be NULL or a live handle.
 */
int64_t rmt_poly_degree(const struct RmtPolynomial *poly);

/**
 * # Safety
 * `point` must hold `len` elements, `out` must be valid for writes.
 */
enum RmtStatus rmt_poly_evaluate(const struct RmtPolynomial *poly,
                                 const uint32_t *point,
                                 size_t len,
                                 uint32_t *out);

/**
 * The polynomial in text format; free with `rmt_string_free`.
 *
 * # Safety
 * `poly` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_poly_to_string(const struct RmtPolynomial *poly, char **out);

/**
 * Exact distance from `poly` to the polynomials of degree at most `d`.
 *
 * # Safety
 * `poly` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_distance(const struct RmtPolynomial *poly, uint64_t d, double *out);

/**
 * Finds a characterization on `m` random points of `F_q^k` (`m = 0` picks the
 * default size) and writes it as JSON. `NotFound` when none exists.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum RmtStatus rmt_characterize_json(const struct RmtField *field,
                                     size_t k,
                                     uint64_t d,
                                     size_t m,
                                     uint64_t seed,
                                     char **out);

/**
 * Runs an experiment from its JSON spec and writes the JSON report.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` valid for writes.
 */
enum RmtStatus rmt_run_experiment_json(const char *spec_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RMTEST_H */
