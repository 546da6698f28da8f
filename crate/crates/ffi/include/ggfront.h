#ifndef GGFRONT_H
#define GGFRONT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum GgfStatus {
  GGF_STATUS_OK = 0,
  GGF_STATUS_NULL_POINTER = 1,
  GGF_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad configuration or parameters.
   */
  GGF_STATUS_VALIDATION = 3,
  /**
   * The solver failed (zero pivot, non-finite state, CFL guard).
   */
  GGF_STATUS_NUMERICAL = 4,
  GGF_STATUS_IO = 5,
  /**
   * The handle has no result yet; call `ggf_run_execute` first.
   */
  GGF_STATUS_NOT_RUN = 6,
  /**
   * The requested quantity was not computed for this run.
   */
  GGF_STATUS_UNAVAILABLE = 7,
  GGF_STATUS_BUFFER_TOO_SMALL = 8,
  GGF_STATUS_PANIC = 9,
} GgfStatus;

typedef enum GgfFrontLabel {
  GGF_FRONT_LABEL_SHARP = 0,
  GGF_FRONT_LABEL_SMOOTH = 1,
  GGF_FRONT_LABEL_INDETERMINATE = 2,
} GgfFrontLabel;

/**
 * Opaque run handle.
 */
typedef struct GgfRun GgfRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty when none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ggf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ggf_version(void);

/**
 * Parses `config` (`key = value` lines) into a new handle stored in `*out`.
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` a writable pointer.
 */
enum GgfStatus ggf_run_new(const char *config, struct GgfRun **out);

/**
 * Runs the configured experiment, replacing any previous result.
 *
 * # Safety
 * `handle` must come from [`ggf_run_new`] and not be freed.
 */
enum GgfStatus ggf_run_execute(struct GgfRun *handle);

/**
 * Asymptotic front speed of the executed run.
 *
 * # Safety
 * `handle` must be live; `out` must be writable.
 */
enum GgfStatus ggf_run_speed(const struct GgfRun *handle, double *out);

/**
 * Number of grid cells of the executed run.
 *
 * # Safety
 * `handle` must be live; `out` must be writable.
 */
enum GgfStatus ggf_run_n_cells(const struct GgfRun *handle, size_t *out);

/**
 * Copies the final tumour density into `buf`, which must hold at least
 * `n_cells` values.
 *
 * # Safety
 * `handle` must be live; `buf` must point to `len` writable doubles.
 */
enum GgfStatus ggf_run_copy_v(const struct GgfRun *handle, double *buf, size_t len);

/**
 * Front shape label of the executed run.
 *
 * # Safety
 * `handle` must be live; `out` must be writable.
 */
enum GgfStatus ggf_run_shape_label(const struct GgfRun *handle, enum GgfFrontLabel *out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`ggf_run_new`] and not be used afterwards.
 */
void ggf_run_free(struct GgfRun *handle);

/**
 * Exact sharp front of the one-equation model at `(x, t)` for `d > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GgfStatus ggf_exact_front(double x, double t, double d, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GGFRONT_H */
