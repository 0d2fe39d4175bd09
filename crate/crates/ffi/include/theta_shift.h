#ifndef THETA_SHIFT_H
#define THETA_SHIFT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  TS_STATUS_DOMAIN = 3,
  TS_STATUS_OUT_OF_RANGE = 4,
  TS_STATUS_NUMERICAL = 5,
  TS_STATUS_PARSE = 6,
  TS_STATUS_IO = 7,
  /**
   * A hard check of an experiment failed; the run itself completed.
   */
  TS_STATUS_CHECK_FAILED = 8,
  TS_STATUS_PANIC = 9,
} TsStatus;

/**
 * A Dirichlet character.
 */
typedef struct TsCharacter TsCharacter;

/**
 * A cusp form: stored coefficients, or the built-in `η(z)³η(7z)³`.
 */
typedef struct TsForm TsForm;

/**
 * A sharp-cutoff series `(X, S(X))`.
 */
typedef struct TsSeries TsSeries;

typedef struct {
  double re;
  double im;
} TsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *ts_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ts_version(void);

/**
 * Parses `trivial[/N]`, `kron:D[/N]` or `prime:p:j[/N]`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
TsStatus ts_character_parse(const char *spec, TsCharacter **out);

/**
 * The Kronecker character `(disc/·)` on `modulus`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
TsStatus ts_character_kronecker(int64_t disc, uint64_t modulus, TsCharacter **out);

/**
 * # Safety
 * `chi` must be NULL or a handle from this library not yet freed.
 */
void ts_character_free(TsCharacter *chi);

/**
 * Modulus of `chi`, or 0 for NULL.
 *
 * # Safety
 * `chi` must be NULL or a live handle.
 */
uint64_t ts_character_modulus(const TsCharacter *chi);

/**
 * Conductor of `chi`, or 0 for NULL.
 *
 * # Safety
 * `chi` must be NULL or a live handle.
 */
uint64_t ts_character_conductor(const TsCharacter *chi);

/**
 * `χ(d)`.
 *
 * # Safety
 * `chi` must be a live handle and `out` a valid pointer.
 */
TsStatus ts_character_value(const TsCharacter *chi, int64_t d, TsComplex *out);

/**
 * `K_ℓ(m,n;c;χ)`, directly or through the multiplicativity relations.
 * `out_bound` may be NULL.
 *
 * # Safety
 * `chi` must be a live handle, `out` valid, `out_bound` NULL or valid.
 */
TsStatus ts_kloosterman(int64_t m,
                        int64_t n,
                        uint64_t c,
                        int64_t ell,
                        const TsCharacter *chi,
                        bool factored,
                        TsComplex *out,
                        double *out_bound);

/**
 * `S(m,n;c;χ)`. `out_bound` may be NULL.
 *
 * # Safety
 * As [`ts_kloosterman`].
 */
TsStatus ts_salie(int64_t m,
                  int64_t n,
                  uint64_t c,
                  const TsCharacter *chi,
                  bool factored,
                  TsComplex *out,
                  double *out_bound);

/**
 * `W_{η,μ}(y)`; `mu` must be real or purely imaginary. `out_degraded` may be
 * NULL.
 *
 * # Safety
 * `out` valid, `out_degraded` NULL or valid.
 */
TsStatus ts_whittaker_w(double eta, TsComplex mu, double y, double *out, bool *out_degraded);

/**
 * `J_{2it}(q)`.
 *
 * # Safety
 * `out` must be valid.
 */
TsStatus ts_bessel_j_imag_order(double t, double q, TsComplex *out);

/**
 * Residual of the theta transformation law at `γ = [[a, b], [c, d]]`.
 *
 * # Safety
 * `out` must be valid.
 */
TsStatus ts_theta_residual(int64_t a, int64_t b, int64_t c, int64_t d, TsComplex z, double *out);

/**
 * Level-576 inner product by quadrature (`k ≥ 5`, `k ≡ 1 mod 4`).
 *
 * # Safety
 * `out` must be valid.
 */
TsStatus ts_remark_inner_product(int64_t k, double *out);

/**
 * Loads a form file, lifted to `level` (0 for `lcm(4, N)`).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid.
 */
TsStatus ts_form_load(const char *path, uint64_t level, TsForm **out);

/**
 * `η(z)³η(7z)³` at `level` (a multiple of 28). Shifted sums use the prime
 * sieve, so any `X` is available.
 *
 * # Safety
 * `out` must be valid.
 */
TsStatus ts_form_eta7(uint64_t level, TsForm **out);

/**
 * # Safety
 * `form` must be NULL or a live handle.
 */
void ts_form_free(TsForm *form);

/**
 * Level of `form`, or 0 for NULL.
 *
 * # Safety
 * `form` must be NULL or a live handle.
 */
uint64_t ts_form_level(const TsForm *form);

/**
 * `a(n)`.
 *
 * # Safety
 * `form` must be a live handle and `out` valid.
 */
TsStatus ts_form_coefficient(const TsForm *form, uint64_t n, TsComplex *out);

/**
 * Residual constant `c_{f,h}` for symmetric-square residue `r`. Writes 0
 * when it vanishes.
 *
 * # Safety
 * `form` must be a live handle and `out` valid.
 */
TsStatus ts_residual_constant(const TsForm *form, uint64_t h, double r, double *out);

/**
 * `S(X)` on the strictly increasing `grid` of `len` points.
 *
 * # Safety
 * `form` live, `grid` readable for `len` values, `out` valid.
 */
TsStatus ts_shifted_sum(const TsForm *form,
                        uint64_t h,
                        const double *grid,
                        size_t len,
                        bool one_sided,
                        TsSeries **out);

/**
 * # Safety
 * `series` must be NULL or a live handle.
 */
void ts_series_free(TsSeries *series);

/**
 * Number of rows, or 0 for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
size_t ts_series_len(const TsSeries *series);

/**
 * Row `i` as `(X, S(X))`.
 *
 * # Safety
 * `series` live, `x` and `s` valid.
 */
TsStatus ts_series_row(const TsSeries *series, size_t i, double *x, double *s);

/**
 * Least-squares exponent of `|S(X) − cX|`.
 *
 * # Safety
 * `series` live, `out` valid.
 */
TsStatus ts_series_fit(const TsSeries *series, double c, double *out);

/**
 * Runs an experiment described by TOML text, writing tables to `out_dir`
 * (NULL: the directory in the config, if any). Returns
 * [`TsStatus::CheckFailed`] when a hard check fails.
 *
 * # Safety
 * `toml` must be a NUL-terminated string, `out_dir` NULL or one.
 */
TsStatus ts_run_config(const char *toml, const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THETA_SHIFT_H */
