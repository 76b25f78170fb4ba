#ifndef DEHNFILL_H
#define DEHNFILL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DhfStatus {
  DHF_STATUS_OK = 0,
  DHF_STATUS_NULL_POINTER = 1,
  DHF_STATUS_DOMAIN = 2,
  DHF_STATUS_ORIENTATION = 3,
  DHF_STATUS_INFINITE_COEFFICIENT = 4,
  DHF_STATUS_DEGENERATE = 5,
  DHF_STATUS_UNCERTIFIABLE = 6,
  DHF_STATUS_QUADRATURE = 7,
  DHF_STATUS_INDEX_OUT_OF_RANGE = 8,
  DHF_STATUS_PANIC = 9,
} DhfStatus;

typedef enum DhfBranch {
  /**
   * `f`: gives the upper bounds.
   */
  DHF_BRANCH_UPPER = 0,
  /**
   * `f̃`: gives the lower bounds.
   */
  DHF_BRANCH_LOWER = 1,
} DhfBranch;

/**
 * Opaque envelope evaluator.
 */
typedef struct DhfEnvelope DhfEnvelope;

/**
 * Opaque list of short slopes.
 */
typedef struct DhfSlopeList DhfSlopeList;

/**
 * Flattened certificate. Bound fields are NaN unless `has_bounds`.
 */
typedef struct DhfCertificate {
  double combined_lhat;
  bool certified;
  double margin;
  double tube_radius_floor;
  bool has_bounds;
  double volume_drop_lo;
  double volume_drop_hi;
  double visual_area_lo;
  double visual_area_hi;
  double core_length_hi;
  double z_hat;
  double z_tilde;
} DhfCertificate;

typedef struct DhfSlope {
  int64_t p;
  int64_t q;
  double lhat;
} DhfSlope;

/**
 * One Fourier coefficient `(c₁, c₂)` of a 1-form at frequency `(m, n)`.
 */
typedef struct DhfMode {
  int32_t m;
  int32_t n;
  double c1_re;
  double c1_im;
  double c2_re;
  double c2_im;
} DhfMode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *dhf_version(void);

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *dhf_last_error(void);

/**
 * Builds the default envelope (domain `[0.45, 1]`, 129-point table).
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_envelope_new(struct DhfEnvelope **out_env);

/**
 * Releases an envelope. NULL is ignored.
 *
 * # Safety
 * `env` must come from [`dhf_envelope_new`] and not have been freed.
 */
void dhf_envelope_free(struct DhfEnvelope *env);

/**
 * `f(z)` or `f̃(z)` for `z` in `[0.45, 1]`.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_envelope_profile(const struct DhfEnvelope *env,
                                    enum DhfBranch which,
                                    double z,
                                    double *out_value);

/**
 * Solves `profile(z) = x` on the decreasing part of the envelope.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_envelope_invert(const struct DhfEnvelope *env,
                                   enum DhfBranch which,
                                   double x,
                                   double *out_z);

/**
 * Certifies a filling from its per-cusp normalized lengths and, when
 * certified, fills in the geometric bounds.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_certify(const struct DhfEnvelope *env,
                           const double *lhats,
                           size_t n,
                           struct DhfCertificate *out_cert);

/**
 * `area_floor(r) = 3.3957 tanh r / cosh 2r`.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_area_floor(double r, double *out_value);

/**
 * Normalized length of the slope `(p, q)` on the cusp with shape `re + i·im`.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_slope_normalized_length(double re,
                                           double im,
                                           int64_t p,
                                           int64_t q,
                                           double *out_value);

/**
 * All primitive slopes of normalized length at most `cutoff`.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_enumerate_short_slopes(double re,
                                          double im,
                                          double cutoff,
                                          struct DhfSlopeList **out_list);

/**
 * Number of slopes in the list; 0 for NULL.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
size_t dhf_slope_list_len(const struct DhfSlopeList *list);

/**
 * Copies entry `index` of the list.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_slope_list_get(const struct DhfSlopeList *list,
                                  size_t index,
                                  struct DhfSlope *out_slope);

/**
 * Releases a slope list. NULL is ignored.
 *
 * # Safety
 * `list` must come from [`dhf_enumerate_short_slopes`] and not have been freed.
 */
void dhf_slope_list_free(struct DhfSlopeList *list);

/**
 * Boundary quadratic form `b(σ, σ)` for a 1-form given by all of its
 * Fourier coefficients, conjugate partners included.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_boundary_form_b(double k1,
                                   double k2,
                                   double epsilon,
                                   const struct DhfMode *modes,
                                   size_t n_modes,
                                   double *out_value);

/**
 * Surgery coefficient `(p, q)` of the torus at radius `r` whose basis
 * curves have complex lengths `a_trans + i·a_rot` and `b_trans + i·b_rot`.
 *
 * # Safety
 * See the pointer contract in the crate documentation.
 */
enum DhfStatus dhf_surgery_coefficient(double r,
                                       double a_trans,
                                       double a_rot,
                                       double b_trans,
                                       double b_rot,
                                       double *out_p,
                                       double *out_q);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEHNFILL_H */
