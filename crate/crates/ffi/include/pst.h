#ifndef PST_H
#define PST_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Simulate the full state vector.
 */
#define PST_REPR_FULL 1

/**
 * Evolve the coordinates in the invariant subspace.
 */
#define PST_REPR_REDUCED 2

/**
 * Evaluate the closed-form fidelity.
 */
#define PST_REPR_ANALYTIC 4

/**
 * Upper bound on the step count accepted by `pst_run_transfer` and
 * `pst_cross_check`.
 */
#define PST_MAX_STEPS 10000000

typedef enum PstStatus {
  PST_STATUS_OK = 0,
  PST_STATUS_NULL_POINTER = 1,
  PST_STATUS_INVALID_ARGUMENT = 2,
  PST_STATUS_DIMENSION_MISMATCH = 3,
  PST_STATUS_CONSISTENCY = 4,
  PST_STATUS_NUMERICAL = 5,
  PST_STATUS_PANIC = 6,
} PstStatus;

typedef enum PstFamily {
  PST_FAMILY_STAR = 0,
  PST_FAMILY_COMPLETE_LOOPS = 1,
  PST_FAMILY_SZEGEDY = 2,
} PstFamily;

/**
 * Opaque walk model.
 */
typedef struct PstModel PstModel;

/**
 * Opaque transfer report.
 */
typedef struct PstReport PstReport;

typedef struct PstComplex {
  double re;
  double im;
} PstComplex;

/**
 * One row of a transfer report. Missing representations are NaN.
 */
typedef struct PstPoint {
  uint64_t t;
  double fidelity_full;
  double fidelity_reduced;
  double fidelity_analytic;
} PstPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the message for the last failed call on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pst_last_error(void);

/**
 * Static description of a status code. Unknown codes get a generic text.
 */
const char *pst_status_message(uint32_t status);

/**
 * Creates a model. `family` is a `PstFamily` value; labels are 1-based.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum PstStatus pst_model_new(uint32_t family,
                             size_t n,
                             size_t sender,
                             size_t receiver,
                             struct PstModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle from `pst_model_new` not yet freed.
 */
void pst_model_free(struct PstModel *model);

/**
 * Dimension of the full state space.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_model_dimension(const struct PstModel *model, size_t *out);

/**
 * Predicted transfer time in steps.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_model_transfer_time(const struct PstModel *model, uint64_t *out);

/**
 * Closed-form fidelity after `t` steps.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_model_fidelity_analytic(const struct PstModel *model, int64_t t, double *out);

/**
 * Writes the sender state into `buf`, which must hold exactly
 * `pst_model_dimension` entries.
 *
 * # Safety
 * `buf` must be null or valid for `len` writes.
 */
enum PstStatus pst_model_initial_state(const struct PstModel *model,
                                       struct PstComplex *buf,
                                       size_t len);

/**
 * Applies one walk step to `buf` in place.
 *
 * # Safety
 * `buf` must be null or valid for `len` reads and writes.
 */
enum PstStatus pst_model_step(const struct PstModel *model, struct PstComplex *buf, size_t len);

/**
 * Runs the transfer experiment for `steps` steps. `repr_mask` is a
 * combination of the `PST_REPR_*` flags.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_run_transfer(const struct PstModel *model,
                                uint64_t steps,
                                uint32_t repr_mask,
                                struct PstReport **out);

/**
 * Largest |full - reduced| fidelity difference over `steps` steps.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_cross_check(const struct PstModel *model, uint64_t steps, double *out);

/**
 * Number of points in the report (steps + 1).
 *
 * # Safety
 * `report` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_report_len(const struct PstReport *report, size_t *out);

/**
 * # Safety
 * `report` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_report_peak_step(const struct PstReport *report, uint64_t *out);

/**
 * # Safety
 * `report` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_report_peak_fidelity(const struct PstReport *report, double *out);

/**
 * # Safety
 * `report` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_report_predicted_t(const struct PstReport *report, uint64_t *out);

/**
 * Copies point `index` of the series into `out`.
 *
 * # Safety
 * `report` must be null or a live handle; `out` null or writable.
 */
enum PstStatus pst_report_point(const struct PstReport *report, size_t index, struct PstPoint *out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must be null or a handle from `pst_run_transfer` not yet freed.
 */
void pst_report_free(struct PstReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PST_H */
