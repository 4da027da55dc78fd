#ifndef SYMPFLOW_H
#define SYMPFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_INVALID_ARGUMENT = 1,
  SF_STATUS_NULL_POINTER = 2,
  SF_STATUS_NOT_SYMPLECTIC = 3,
  SF_STATUS_NUMERICAL = 4,
  SF_STATUS_FLOW_FAILURE = 5,
  SF_STATUS_IO = 6,
  SF_STATUS_BUFFER_SIZE = 7,
  SF_STATUS_PANIC = 8,
} SfStatus;

typedef enum SfProfile {
  SF_PROFILE_CONSTANT = 0,
  SF_PROFILE_SMOOTH_TWIST = 1,
} SfProfile;

/**
 * Opaque flow state.
 */
typedef struct SfFlowState SfFlowState;

/**
 * Opaque symplectic matrix.
 */
typedef struct SfSymplecticMap SfSymplecticMap;

/**
 * Scalar monitors of a flow state.
 */
typedef struct SfMonitorReport {
  double t;
  double min_star_omega;
  double max_sff_norm;
  double max_lambda_dev;
  double total_area;
  double max_symplectic_residual;
} SfMonitorReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Builds a map from `len = 4n²` row-major entries.
 *
 * # Safety
 * `entries` must point to `len` doubles; `out` must be writable.
 */
enum SfStatus sf_map_from_rows(size_t n,
                               const double *entries,
                               size_t len,
                               double tol,
                               struct SfSymplecticMap **out);

/**
 * `exp(JS)` with `S` drawn from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_map_random(size_t n, uint64_t seed, double spread, struct SfSymplecticMap **out);

/**
 * # Safety
 * `map` must come from this library and not be used afterwards. Null is ignored.
 */
void sf_map_free(struct SfSymplecticMap *map);

/**
 * Half-dimension `n`, or 0 for null.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
size_t sf_map_n(const struct SfSymplecticMap *map);

/**
 * Paired singular values into `out[0..2n]`.
 *
 * # Safety
 * `map` must be a live handle; `out` must hold `len` doubles.
 */
enum SfStatus sf_map_singular_values(const struct SfSymplecticMap *map, double *out, size_t len);

/**
 * Polar isometry, row-major, into `out[0..4n²]`.
 *
 * # Safety
 * `map` must be a live handle; `out` must hold `len` doubles.
 */
enum SfStatus sf_map_polar_isometry(const struct SfSymplecticMap *map, double *out, size_t len);

/**
 * Adapted bases `A` and `Ã` (row-major, `4n²` each) and the spectrum (`2n`).
 *
 * # Safety
 * `map` must be a live handle; each buffer must hold the stated count.
 */
enum SfStatus sf_map_adapted_basis(const struct SfSymplecticMap *map,
                                   double *a,
                                   double *a_tilde,
                                   size_t square_len,
                                   double *spectrum,
                                   size_t spectrum_len);

/**
 * `*Ω` of a paired spectrum of length `2n`.
 *
 * # Safety
 * `lambda` must hold `len` doubles; `out` must be writable.
 */
enum SfStatus sf_star_omega(const double *lambda, size_t len, double *out);

/**
 * Curvature term of a paired spectrum.
 *
 * # Safety
 * `lambda` must hold `len` doubles; `out` must be writable.
 */
enum SfStatus sf_curvature_sum(const double *lambda, size_t len, double *out);

/**
 * Smallest eigenvalue of `Q(λ)` relative to the tensor norm.
 *
 * # Safety
 * `lambda` must hold `len` doubles; `out` must be writable.
 */
enum SfStatus sf_qform_min_eig_ratio(const double *lambda, size_t len, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_eps_from_lambda(size_t n, double big_lambda, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_lambda_from_eps(size_t n, double eps, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_preservation_eps(size_t n, double big_lambda, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_lambda1(size_t n, double lambda0, double *out);

/**
 * Box minimum `δ_Λ` with `grid` points per axis.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_delta_box(size_t n, double big_lambda, size_t grid, double *out);

/**
 * Pinching constant `Λ₀(n)`. `*found` is false when `δ` stays positive up
 * to `cap`; `*out` is then `+∞`.
 *
 * # Safety
 * `out` and `found` must be writable.
 */
enum SfStatus sf_lambda0(size_t n, double tol, double cap, size_t grid, double *out, bool *found);

/**
 * Closed-form solution of the comparison ODE at time `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_comparison_ode(double k1,
                                double k2,
                                double delta,
                                double c0,
                                double eps,
                                double y0,
                                double t,
                                double *out);

/**
 * Initial twist on `n` intervals.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_flow_init(size_t n,
                           enum SfProfile profile,
                           double amplitude,
                           struct SfFlowState **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SfStatus sf_flow_read_checkpoint(const char *path, struct SfFlowState **out);

/**
 * # Safety
 * `state` must be a live handle; `path` a NUL-terminated string.
 */
enum SfStatus sf_flow_write_checkpoint(const struct SfFlowState *state, const char *path);

/**
 * # Safety
 * `state` must come from this library and not be used afterwards. Null is ignored.
 */
void sf_flow_free(struct SfFlowState *state);

/**
 * Flow time of a state, NaN for null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
double sf_flow_time(const struct SfFlowState *state);

/**
 * Advances by `duration` with `dt = cfl·Δθ²` (the last step is shortened).
 * On failure the state is left unchanged.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum SfStatus sf_flow_advance(struct SfFlowState *state, double duration, double cfl);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_flow_monitor(const struct SfFlowState *state, struct SfMonitorReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMPFLOW_H */
