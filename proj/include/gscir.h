/*
 * gscir - group-sparse low-rank image restoration.
 *
 * C interface to the restoration core. All objects are opaque handles
 * created and destroyed through this API; every fallible call returns a
 * gscir_status, with a thread-local message available from
 * gscir_last_error(). Images are real-valued H x W x C grids in [0, 255]
 * with C = 1 or 3.
 */

#ifndef GSCIR_H
#define GSCIR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gscir_status {
  GSCIR_OK = 0,
  GSCIR_ERR_INVALID_ARGUMENT = 1,
  GSCIR_ERR_IO = 2,
  GSCIR_ERR_NUMERIC = 3,
  GSCIR_ERR_UNSUPPORTED = 4,
} gscir_status;

/* Thread-local message for the most recent failing call. */
const char* gscir_last_error(void);

const char* gscir_version(void);

/* ------------------------------------------------------------- images */

typedef struct gscir_image gscir_image;

/* Loads .pgm/.ppm/.pnm or .png (8-bit gray or RGB). */
gscir_status gscir_image_load(const char* path, gscir_image** out);

/* Saves with clamping to [0,255] and round-half-to-even quantization. */
gscir_status gscir_image_save(const gscir_image* img, const char* path);

/* Wraps a copy of row-major interleaved doubles (r, c, channel order). */
gscir_status gscir_image_create(int height, int width, int channels,
                                const double* data, gscir_image** out);

void gscir_image_free(gscir_image* img);

int gscir_image_height(const gscir_image* img);
int gscir_image_width(const gscir_image* img);
int gscir_image_channels(const gscir_image* img);

/* Copies pixels out as row-major interleaved doubles; buffer_len must be
 * at least height*width*channels. */
gscir_status gscir_image_data(const gscir_image* img, double* buffer, size_t buffer_len);

/* 10*log10(255^2/MSE) over all pixels and channels; HUGE_VAL for
 * identical images. Inputs are compared as given (quantize first to
 * reproduce reported numbers). */
gscir_status gscir_psnr(const gscir_image* a, const gscir_image* b, double* out);

/* ------------------------------------------------------------- tasks */

/*
 * A task bundles one restoration problem. Create it with a task name,
 * tune it with key/value setters, run it, then read the results.
 *
 * Task names: "cs", "inpaint", "textremove", "deblur", "spn", "denoise".
 *
 * Numeric keys (gscir_task_set):
 *   p             exponent of the rank surrogate: 0.5, 0.6667 or 1.0
 *   subrate       cs sampling ratio in (0, 1]
 *   missing       inpaint missing-pixel fraction in [0, 1)
 *   density       spn corruption density in [0, 1]
 *   sigma         additive Gaussian noise level (deblur, denoise)
 *   mu, lambda    penalty parameters; defaults come from built-in tables
 *   patch_side, group_size, stride, search_radius, epsilon
 *   inner_iters, iters, grad_steps, block_side
 *   tol           relative-change stopping threshold
 *   seed          RNG seed (non-negative integer)
 *   threads       worker threads; 0 = hardware concurrency
 *
 * String keys (gscir_task_set_string):
 *   kernel        "uniform9" | "gaussian25" | "motion20" |
 *                 "uniform:<side>" | "gaussian:<side>:<sigma>" |
 *                 "motion:<len>:<angle>"
 *   mask          path of a mask image (0 = missing pixel)
 *   trace         path to write the per-iteration trace CSV
 *   degraded_in   path of a degraded image, or of a .csm measurement
 *                 file for "cs"; skips degradation synthesis
 *   degraded_out  path to save the synthesized degraded image or
 *                 measurements (.csm for "cs")
 */

typedef struct gscir_task gscir_task;

gscir_status gscir_task_create(const char* task_name, gscir_task** out);
void gscir_task_free(gscir_task* task);

gscir_status gscir_task_set(gscir_task* task, const char* key, double value);
gscir_status gscir_task_set_string(gscir_task* task, const char* key, const char* value);

typedef struct gscir_report {
  double psnr_in;   /* degraded baseline vs reference; NaN without one */
  double psnr_out;  /* restored vs reference; NaN without one */
  int iterations;
  double seconds;
  double mu;
  double lambda;
} gscir_report;

/*
 * Runs the task. `input` is the clean image when synthesizing the
 * degradation, or the PSNR reference (may be NULL) when degraded_in is
 * set. On success *restored holds a new image owned by the caller.
 */
gscir_status gscir_task_run(gscir_task* task, const gscir_image* input,
                            gscir_image** restored, gscir_report* report);

/* Degraded baseline of the last run (owned by the caller); NULL if the
 * task has not run. */
gscir_status gscir_task_degraded(const gscir_task* task, gscir_image** out);

/* Summary line of the last run: task, p, parameter, PSNRs, iterations,
 * seconds. Pointer valid until the next run or free. */
const char* gscir_task_summary(const gscir_task* task);

/* -------------------------------------------------------- verification */

/* Runs the numerical self-checks (prox closed forms vs grid search,
 * operator adjoint identities, grouping round trip, per-group objective
 * descent). Prints one line per check to stdout when verbose is nonzero.
 * Returns the number of failed checks. */
int gscir_verify(int verbose);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GSCIR_H */
