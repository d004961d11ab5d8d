#ifndef THINSET_H
#define THINSET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  TS_STATUS_PARSE = 3,
  TS_STATUS_INVALID_ARGUMENT = 4,
  TS_STATUS_BUDGET = 5,
  // A result does not fit the output type.
  TS_STATUS_OVERFLOW = 6,
  TS_STATUS_PANIC = 7,
} TsStatus;

// Polynomial split into top and lower weighted parts.
typedef struct TsCover TsCover;

// Polynomial with integer coefficients.
typedef struct TsPolynomial TsPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or NULL. The
// pointer stays valid until the next failing call on the same thread.
const char *ts_last_error_message(void);

// Parses `text` as a polynomial in `arity` variables named
// `Y, X1, …` (or `X0, …` / `X1, …` when those names are used).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum TsStatus ts_poly_parse(const char *text, size_t arity, struct TsPolynomial **out);

// # Safety
// `p` must come from `ts_poly_parse` and not be freed twice. NULL is ignored.
void ts_poly_free(struct TsPolynomial *p);

// # Safety
// `p` must be a live handle.
size_t ts_poly_arity(const struct TsPolynomial *p);

// Canonical text of `p`; release it with `ts_string_free`.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum TsStatus ts_poly_to_string(const struct TsPolynomial *p, char **out);

// # Safety
// `s` must come from this library. NULL is ignored.
void ts_string_free(char *s);

// Splits `p` (variables `Y, X1, …, Xn`) for weights `(e, 1, …, 1)`.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum TsStatus ts_cover_split(const struct TsPolynomial *p,
                             size_t n,
                             uint32_t e,
                             struct TsCover **out);

// # Safety
// `c` must come from `ts_cover_split` and not be freed twice. NULL is ignored.
void ts_cover_free(struct TsCover *c);

// Degree in `Y`, or 0 for NULL.
//
// # Safety
// `c` must be a live handle.
uint32_t ts_cover_degree(const struct TsCover *c);

// Integral solutions with `|y| ≤ B^e`, `|x_i| ≤ B`. `max_nodes = 0` means
// no limit.
//
// # Safety
// `c` must be a live handle; `n_aff` and `n_cover` valid pointers.
enum TsStatus ts_count_affine(const struct TsCover *c,
                              uint64_t b,
                              uint64_t max_nodes,
                              uint64_t *n_aff,
                              uint64_t *n_cover);

// Number of monomials of weighted degree `m` for `weights[0..len]`.
//
// # Safety
// `weights` must point to `len` integers and `out` be valid.
enum TsStatus ts_count_monomials(const uint64_t *weights, size_t len, uint64_t m, uint64_t *out);

// Solutions mod `p` on the affine cone (the homogenization when `f` is
// not homogeneous).
//
// # Safety
// `f` must be a live handle and `out` valid.
enum TsStatus ts_count_points_mod_p(const struct TsPolynomial *f,
                                    uint64_t p,
                                    uint64_t max_nodes,
                                    uint64_t *out);

// Writes 1 when `f` is absolutely irreducible over the rationals
// (`p = 0`) or over the prime field `F_p`, else 0.
//
// # Safety
// `f` must be a live handle and `out` valid.
enum TsStatus ts_absolutely_irreducible(const struct TsPolynomial *f,
                                        uint64_t p,
                                        uint64_t seed,
                                        int *out);

// Writes 1 when `observed ≤ d (2B+1)^m`, else 0.
//
// # Safety
// `ok` must be valid.
enum TsStatus ts_schwarz_zippel_check(uint64_t d,
                                      uint32_t m,
                                      uint64_t b,
                                      uint64_t observed,
                                      int *ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THINSET_H */
