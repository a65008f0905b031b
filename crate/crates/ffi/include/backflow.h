/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef BACKFLOW_H
#define BACKFLOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum BfStatus {
  BF_STATUS_OK = 0,
  BF_STATUS_NULL_POINTER = 1,
  BF_STATUS_INVALID_UTF8 = 2,
  BF_STATUS_PARSE = 3,
  BF_STATUS_INVALID_ARGUMENT = 4,
  BF_STATUS_DOMAIN = 5,
  BF_STATUS_DIMENSION_MISMATCH = 6,
  BF_STATUS_PARTICLE_COUNT_MISMATCH = 7,
  BF_STATUS_FIELD_MISMATCH = 8,
  BF_STATUS_NOT_TAIL_SYMMETRIC = 9,
  BF_STATUS_ENUMERATION_GUARD = 10,
  BF_STATUS_RESOURCE_GUARD = 11,
  BF_STATUS_OVERFLOW = 12,
  BF_STATUS_PANIC = 13,
} BfStatus;

// Opaque ansatz configuration (profile plus per-column bases).
typedef struct BfAnsatz BfAnsatz;

// Opaque polynomial.
typedef struct BfPolynomial BfPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string. Do not free.
const char *bf_version(void);

// Message for the last failed call on this thread, or NULL. The pointer stays
// valid until the next library call on the same thread. Do not free.
const char *bf_last_error(void);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a pointer previously returned through an output
// parameter of this library and not yet freed.
void bf_string_free(char *s);

// Partitions of `m` into at most `k` parts, as a decimal string.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum BfStatus bf_pbar(size_t k, size_t m, char **out);

// Strict partitions of `m` with `k` or `k - 1` parts, as a decimal string.
//
// # Safety
// As for [`bf_pbar`].
enum BfStatus bf_qbar(size_t k, size_t m, char **out);

// Exact dimension of the degree-`degree` antisymmetric space for `n`
// particles, as a decimal string.
//
// # Safety
// As for [`bf_pbar`].
enum BfStatus bf_target_dim(size_t n, uint32_t degree, char **out);

// Exact parameter count of a degree profile, as a decimal string.
//
// # Safety
// `degrees` must point to `len` readable values; `out` as for [`bf_pbar`].
enum BfStatus bf_source_dim(const uint32_t *degrees, size_t len, char **out);

// Smallest total degree with a nonzero antisymmetric space.
//
// # Safety
// `out` must be a valid pointer.
enum BfStatus bf_min_degree(size_t n, uint64_t *out);

// Build the ansatz configuration for a nondecreasing degree profile.
//
// # Safety
// `degrees` must point to `len` readable values; `out` must be valid.
enum BfStatus bf_ansatz_new(const uint32_t *degrees, size_t len, struct BfAnsatz **out);

// Release an ansatz handle. NULL is ignored.
//
// # Safety
// `h` must be NULL or a live handle from [`bf_ansatz_new`].
void bf_ansatz_free(struct BfAnsatz *h);

// Number of coefficients the configuration takes.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum BfStatus bf_ansatz_param_count(const struct BfAnsatz *h, size_t *out);

// Evaluate the backflow determinant at rational coefficients given as
// strings such as `"3"` or `"-2/5"`, in canonical basis order.
//
// # Safety
// `h` must be a live handle; `coeffs` must point to `len` NUL-terminated
// strings; `out` must be valid.
enum BfStatus bf_ansatz_eval(const struct BfAnsatz *h,
                             const char *const *coeffs,
                             size_t len,
                             struct BfPolynomial **out);

// Evaluate an ansatz description in the JSON file format.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid.
enum BfStatus bf_ansatz_spec_eval(const char *json, struct BfPolynomial **out);

// Release a polynomial handle. NULL is ignored.
//
// # Safety
// `h` must be NULL or a live polynomial handle.
void bf_polynomial_free(struct BfPolynomial *h);

// Number of nonzero terms.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum BfStatus bf_polynomial_term_count(const struct BfPolynomial *h, size_t *out);

// Whether the polynomial changes sign under every transposition of particles.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum BfStatus bf_polynomial_is_antisymmetric(const struct BfPolynomial *h, bool *out);

// Polynomial in the JSON exchange format.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum BfStatus bf_polynomial_json(const struct BfPolynomial *h, char **out);

// Polynomial as plain text, `c * x[i][a]^e * ...` joined by ` + `.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum BfStatus bf_polynomial_text(const struct BfPolynomial *h, char **out);

// Maximum Jacobian rank of the ansatz map over `trials` random points mod `prime`.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum BfStatus bf_generic_rank(const struct BfAnsatz *h,
                              size_t trials,
                              uint64_t prime,
                              uint64_t seed,
                              size_t *out);

// Rank report for sums of `r` determinants at `(n, degree)` as JSON.
// `all_profiles` probes every profile; otherwise only the largest one.
//
// # Safety
// `out` must be valid.
enum BfStatus bf_rank_report_json(size_t n,
                                  uint32_t degree,
                                  size_t r,
                                  size_t trials,
                                  uint64_t prime,
                                  uint64_t seed,
                                  bool all_profiles,
                                  char **out);

// Run one command-line invocation. `argv` excludes the program name.
// Writes the JSON document to `out_json` and the exit code to `out_code`.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; outputs must be valid.
enum BfStatus bf_cli_run(const char *const *argv, size_t argc, char **out_json, int32_t *out_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BACKFLOW_H */
