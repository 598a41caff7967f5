#ifndef RACKKIT_H
#define RACKKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum RkStatus {
  RK_STATUS_OK = 0,
  RK_STATUS_NULL_POINTER = 1,
  RK_STATUS_INVALID_UTF8 = 2,
  RK_STATUS_PARSE = 3,
  RK_STATUS_INVALID_STRUCTURE = 4,
  RK_STATUS_NOT_COCOMMUTATIVE = 5,
  RK_STATUS_RESOURCE_BOUND = 6,
  RK_STATUS_VERIFICATION_FAILED = 7,
  RK_STATUS_UNKNOWN_EXAMPLE = 8,
  RK_STATUS_INTERNAL = 9,
} RkStatus;

// The deformation complex of a cocommutative rack bialgebra.
typedef struct RkComplex RkComplex;

// A truncated enveloping algebra.
typedef struct RkEnveloping RkEnveloping;

// A rack bialgebra over the rationals.
typedef struct RkRack RkRack;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. Valid until the next call.
const char *rk_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void rk_string_free(char *s);

// Parses a JSON structure file with a rack section.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum RkStatus rk_rack_from_json(const char *json, struct RkRack **out);

// Loads a built-in example by name.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum RkStatus rk_rack_example(const char *name, struct RkRack **out);

// # Safety
// `rack` must come from this library and not have been freed.
void rk_rack_free(struct RkRack *rack);

// Dimension of the underlying coalgebra, or 0 for a null handle.
//
// # Safety
// `rack` must be null or a live handle.
size_t rk_rack_dim(const struct RkRack *rack);

// Checks the five axioms; `*all_hold` is 1 when they all pass.
//
// # Safety
// `rack` must be a live handle; `all_hold` must be writable.
enum RkStatus rk_rack_check(const struct RkRack *rack, int32_t *all_hold);

// The axiom report as canonical JSON.
//
// # Safety
// `rack` must be a live handle; `out` must be writable.
enum RkStatus rk_rack_check_json(const struct RkRack *rack, char **out);

// The structure as a JSON structure file.
//
// # Safety
// `rack` must be a live handle; `out` must be writable.
enum RkStatus rk_rack_to_json(const struct RkRack *rack, char **out);

// Builds the enveloping algebra up to word length `degree`.
//
// # Safety
// `rack` must be a live handle; `out` must be writable.
enum RkStatus rk_enveloping_new(const struct RkRack *rack,
                                size_t degree,
                                size_t slack,
                                struct RkEnveloping **out);

// # Safety
// `env` must come from this library and not have been freed.
void rk_enveloping_free(struct RkEnveloping *env);

// Copies `dim F_k U` for `k = 0..=degree` into `buf`. `*written` receives
// the full length even when `len` is too small, in which case nothing is
// copied and the status is `ResourceBound`.
//
// # Safety
// `env` must be a live handle; `buf` must hold `len` entries; `written` must be writable.
enum RkStatus rk_enveloping_series(const struct RkEnveloping *env,
                                   size_t *buf,
                                   size_t len,
                                   size_t *written);

// 1 when the dimension series did not change with one more slack.
//
// # Safety
// `env` must be null or a live handle.
int32_t rk_enveloping_stabilized(const struct RkEnveloping *env);

// The enveloping report as canonical JSON.
//
// # Safety
// `env` must be a live handle; `out` must be writable.
enum RkStatus rk_enveloping_report_json(const struct RkEnveloping *env, char **out);

// The deformation complex; fails with `NotCocommutative` when it is undefined.
//
// # Safety
// `rack` must be a live handle; `out` must be writable.
enum RkStatus rk_complex_new(const struct RkRack *rack, struct RkComplex **out);

// # Safety
// `cx` must come from this library and not have been freed.
void rk_complex_free(struct RkComplex *cx);

// `dim Hⁿ` of the deformation complex.
//
// # Safety
// `cx` must be a live handle; `out` must be writable.
enum RkStatus rk_complex_betti(const struct RkComplex *cx, size_t n, size_t *out);

// Coderivation dims, ranks, `d∘d` and Betti numbers up to `max_n` as canonical JSON.
//
// # Safety
// `cx` must be a live handle; `out` must be writable.
enum RkStatus rk_complex_report_json(const struct RkComplex *cx, size_t max_n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RACKKIT_H */
