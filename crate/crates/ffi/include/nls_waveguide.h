#ifndef NLS_WAVEGUIDE_H
#define NLS_WAVEGUIDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NlswStatus {
  NLSW_STATUS_OK = 0,
  NLSW_STATUS_NULL_POINTER = 1,
  NLSW_STATUS_DOMAIN = 2,
  NLSW_STATUS_NUMERIC = 3,
  NLSW_STATUS_GRID = 4,
  NLSW_STATUS_OUT_OF_RANGE = 5,
  NLSW_STATUS_PANIC = 6,
} NlswStatus;

/**
 * Opaque problem: exponent, dimensions, compact factor and GN constants.
 */
typedef struct NlswProblem NlswProblem;

/**
 * Opaque result of a bifurcation scan.
 */
typedef struct NlswScan NlswScan;

/**
 * Threshold summary. Infinite t* is `INFINITY`; `rho_ex_improved` is NaN
 * at the mass-critical exponent and `INFINITY` when the estimate is unbounded.
 */
typedef struct NlswThresholds {
  double a;
  double b;
  double theta;
  double g;
  double t_star;
  double rho_ex_basic;
  double rho_ex_improved;
  double rho_tr_upper;
  double lambda_ex;
  bool criterion_basic;
  bool criterion_improved;
  bool conditional_on_a;
  bool conditional_on_b;
} NlswThresholds;

typedef struct NlswSphereTerms {
  double t1;
  double t2;
  double t3;
  double t4;
  bool holds;
} NlswSphereTerms;

typedef struct NlswScanRow {
  double rho;
  double m_numeric;
  double i_closed;
  double y_nontriviality;
  double t_ratio;
  size_t iterations;
  /**
   * 0 converged, 1 hit-t-star, 2 max-iterations, 3 diverged, 4 error.
   */
  int32_t status;
} NlswScanRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t nlsw_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nlsw_version(void);

/**
 * ℝ × 𝕊ᵏ with its exact constants.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum NlswStatus nlsw_problem_new_sphere(uint32_t k, double alpha, struct NlswProblem **out);

/**
 * ℝ × circle of length `length`. B is unknown and defaulted (conditional).
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum NlswStatus nlsw_problem_new_torus(double length, double alpha, struct NlswProblem **out);

/**
 * ℝᴺ × M with M described by (k, vol, μ₁). Non-positive `a` or `b` means "not known".
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum NlswStatus nlsw_problem_new_generic(uint32_t n,
                                         uint32_t k,
                                         double alpha,
                                         double vol,
                                         double mu1,
                                         double a,
                                         double b,
                                         struct NlswProblem **out);

/**
 * Releases a problem handle; null is ignored.
 *
 * # Safety
 * `p` must be null or a handle from an `nlsw_problem_new_*` call not yet freed.
 */
void nlsw_problem_free(struct NlswProblem *p);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum NlswStatus nlsw_thresholds(const struct NlswProblem *p, struct NlswThresholds *out);

/**
 * Second variation of E at the y-constant soliton of total mass ρ² along φ₁Z.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum NlswStatus nlsw_second_variation(const struct NlswProblem *p, double rho, double *out);

/**
 * ρ₀ = ‖U‖ for the unit-frequency soliton in ℝᴺ.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum NlswStatus nlsw_rho0(double alpha, uint32_t n, double *out);

/**
 * G with I_ρ = −Gρ^{2+4α/(4−Nα)}.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum NlswStatus nlsw_g_constant(double alpha, uint32_t n, double *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum NlswStatus nlsw_sphere_terms(uint32_t k, double alpha, struct NlswSphereTerms *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum NlswStatus nlsw_sphere_mass_critical(uint32_t k, bool *out);

/**
 * Runs the ℝ×T¹_L scan on `n` ascending masses with a `nx`×`ny` grid.
 *
 * # Safety
 * `rhos` must point to `n` doubles and `out` to a handle slot.
 */
enum NlswStatus nlsw_scan_run(double alpha,
                              double length,
                              const double *rhos,
                              size_t n,
                              size_t nx,
                              size_t ny,
                              struct NlswScan **out);

/**
 * # Safety
 * `s` must be a live scan handle.
 */
size_t nlsw_scan_len(const struct NlswScan *s);

/**
 * The ρ*_tr estimate of the scan, NaN when no row qualifies.
 *
 * # Safety
 * `s` must be a live scan handle.
 */
double nlsw_scan_estimate(const struct NlswScan *s);

/**
 * # Safety
 * `s` must be a live scan handle and `out` a valid pointer.
 */
enum NlswStatus nlsw_scan_row(const struct NlswScan *s, size_t index, struct NlswScanRow *out);

/**
 * # Safety
 * `s` must be null or a handle from [`nlsw_scan_run`] not yet freed.
 */
void nlsw_scan_free(struct NlswScan *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NLS_WAVEGUIDE_H */
