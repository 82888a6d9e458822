#ifndef QLMASS_H
#define QLMASS_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlmMetricKind {
  QLM_METRIC_KIND_MINKOWSKI = 0,
  QLM_METRIC_KIND_ANTI_DE_SITTER = 1,
  QLM_METRIC_KIND_SCHWARZSCHILD = 2,
  QLM_METRIC_KIND_ADS_SCHWARZSCHILD = 3,
} QlmMetricKind;

typedef enum QlmStatus {
  QLM_STATUS_OK = 0,
  QLM_STATUS_NULL_POINTER = 1,
  QLM_STATUS_INVALID_ARGUMENT = 2,
  QLM_STATUS_DOMAIN = 3,
  QLM_STATUS_HYPOTHESIS = 4,
  QLM_STATUS_NUMERICAL = 5,
  QLM_STATUS_PANIC = 6,
} QlmStatus;

/**
 * Opaque static spacetime.
 */
typedef struct QlmMetric QlmMetric;

/**
 * Opaque closed surface: chart, quadrature grid and slice-adapted geometry.
 */
typedef struct QlmSurface QlmSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qlm_version(void);

/**
 * Copy the last error message of this thread into `buf` (truncated and
 * NUL-terminated). Returns the full message length excluding the NUL, or
 * 0 if there is none.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t qlm_last_error_message(char *buf, size_t len);

/**
 * `kind` is a [`QlmMetricKind`] value; `mass` is ignored for the
 * massless kinds.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum QlmStatus qlm_metric_new(int32_t kind, double mass, struct QlmMetric **out);

/**
 * # Safety
 * `metric` must be null or a handle from [`qlm_metric_new`] not yet freed.
 */
void qlm_metric_free(struct QlmMetric *metric);

/**
 * Residual of the conformal Killing-Yano equation for `r dr ^ dt` at
 * `point = (t, r, theta, phi)` on coordinate vectors `x, y, z`.
 *
 * # Safety
 * Pointers must be valid; arrays hold four doubles.
 */
enum QlmStatus qlm_cky_residual(const struct QlmMetric *metric,
                                const double *point,
                                const double *x,
                                const double *y,
                                const double *z,
                                double *out);

/**
 * Coordinate sphere `t = 0, r = radius`.
 *
 * # Safety
 * `metric` must be a live handle and `out` valid for one write.
 */
enum QlmStatus qlm_surface_sphere_new(const struct QlmMetric *metric,
                                      double radius,
                                      size_t n_theta,
                                      size_t n_phi,
                                      struct QlmSurface **out);

/**
 * Axisymmetric graph `r = sum r_k cos(k theta)`, `t = sum t_k cos(k theta)`.
 *
 * # Safety
 * `r_coeffs` and `t_coeffs` must hold `n_r` and `n_t` doubles (either may
 * be null when its length is 0); `metric` must be live; `out` valid.
 */
enum QlmStatus qlm_surface_graph_new(const struct QlmMetric *metric,
                                     const double *r_coeffs,
                                     size_t n_r,
                                     const double *t_coeffs,
                                     size_t n_t,
                                     size_t n_theta,
                                     size_t n_phi,
                                     struct QlmSurface **out);

/**
 * # Safety
 * `surface` must be null or a live surface handle.
 */
void qlm_surface_free(struct QlmSurface *surface);

/**
 * Area of the surface.
 *
 * # Safety
 * `surface` must be live and `out` valid.
 */
enum QlmStatus qlm_surface_area(const struct QlmSurface *surface, double *out);

/**
 * Both sides of the (2,0) Minkowski formula and their difference.
 *
 * # Safety
 * `surface` must be live; each out-pointer must be valid.
 */
enum QlmStatus qlm_minkowski_formula(const struct QlmSurface *surface,
                                     double *lhs,
                                     double *rhs,
                                     double *residual);

/**
 * Liu-Yau mass of a surface in a static slice against its Euclidean image.
 *
 * # Safety
 * `surface` must be live and `out` valid.
 */
enum QlmStatus qlm_liu_yau_mass(const struct QlmSurface *surface, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLMASS_H */
