/* Copyright 2026 The vsr Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the video super-resolution core. All entry points return a
 * vsr_status; on failure vsr_last_error() holds a message for the calling
 * thread. Handles are opaque and single-threaded: do not share one handle
 * across threads without external locking.
 */

#ifndef VSR_C_API_H
#define VSR_C_API_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VSR_API __declspec(dllexport)
#else
#define VSR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vsr_status {
  VSR_OK = 0,
  VSR_ERR_CONFIG = 1,  /* bad config file/flags/hyperparameters */
  VSR_ERR_DATA = 2,    /* missing or malformed user data */
  VSR_ERR_NUMERIC = 3, /* NaN/Inf, gradient-check failure */
  VSR_ERR_INVALID = 4, /* API misuse: null handle, bad argument */
  VSR_ERR_INTERNAL = 5
} vsr_status;

/* Message describing the calling thread's most recent failure ("" if none).
 * Valid until the thread's next API call. */
VSR_API const char* vsr_last_error(void);

VSR_API const char* vsr_version(void);

/* Caps internal worker threads for all subsequent calls; 1 = fully
 * deterministic mode. Fails on n < 1. */
VSR_API vsr_status vsr_set_num_threads(int n);

/* Frees any string returned through a char** out-parameter. */
VSR_API void vsr_string_free(char* s);

/* Parses + validates a JSON run config and returns its canonical form with
 * every default filled in; free with vsr_string_free. */
VSR_API vsr_status vsr_config_canonical(const char* config_json, char** out);

/* ---------------------------------------------------------------- training */

typedef struct vsr_trainer vsr_trainer;

typedef struct vsr_loss_report {
  int64_t step; /* 1-based, the step just taken */
  double l_align;
  double l_sr;
  double total;
  double lr;
} vsr_loss_report;

/* Builds model + optimizer + dataset from a JSON run config (see
 * docs/config.md). The training dataset is loaded and validated here, before
 * any output is written. */
VSR_API vsr_status vsr_trainer_create(const char* config_json, vsr_trainer** out);

/* As create, but restores parameters, optimizer state and data-stream
 * position from a checkpoint. The checkpoint's model config must match. */
VSR_API vsr_status vsr_trainer_resume(const char* config_json, const char* checkpoint_path,
                                      vsr_trainer** out);

VSR_API vsr_status vsr_trainer_step(vsr_trainer* t, vsr_loss_report* out);

/* Mean PSNR/SSIM over the sequences under eval_root (config's eval protocol),
 * super-resolving with the current weights. */
VSR_API vsr_status vsr_trainer_validate(vsr_trainer* t, const char* eval_root, double* mean_psnr,
                                        double* mean_ssim);

VSR_API vsr_status vsr_trainer_save(vsr_trainer* t, const char* path);

/* Canonical JSON of the effective config (defaults + file + overrides);
 * free with vsr_string_free. */
VSR_API vsr_status vsr_trainer_config_json(const vsr_trainer* t, char** out);

VSR_API vsr_status vsr_trainer_param_count(const vsr_trainer* t, int64_t* out);
VSR_API vsr_status vsr_trainer_current_step(const vsr_trainer* t, int64_t* out);
VSR_API vsr_status vsr_trainer_planned_steps(const vsr_trainer* t, int64_t* out);
VSR_API void vsr_trainer_destroy(vsr_trainer* t);

/* --------------------------------------------------------------- inference */

typedef struct vsr_model vsr_model;

VSR_API vsr_status vsr_model_open(const char* checkpoint_path, vsr_model** out);

/* Super-resolves every PNG frame under lr_dir into out_dir (same count;
 * boundary frames use clip replication). dump_aligned != 0 additionally
 * writes each frame's aligned supporting frames under out_dir/aligned/. */
VSR_API vsr_status vsr_model_infer_dir(vsr_model* m, const char* lr_dir, const char* out_dir,
                                       int dump_aligned);

VSR_API vsr_status vsr_model_param_count(const vsr_model* m, int64_t* out);

/* JSON description of the model architecture stored in the checkpoint;
 * free with vsr_string_free. */
VSR_API vsr_status vsr_model_config_json(const vsr_model* m, char** out);
VSR_API void vsr_model_destroy(vsr_model* m);

/* ------------------------------------------------------------ data tooling */

/* Degrades every PNG sequence under hr_root into out_root (mirrored layout)
 * and writes a manifest recording the exact settings. mode: "bi" | "bd";
 * sigma/phase only apply to "bd". */
VSR_API vsr_status vsr_degrade_dataset(const char* hr_root, const char* out_root, const char* mode,
                                       int scale, double sigma, int phase);

/* Renders synthetic HR sequences with known ground-truth motion.
 * kind: "translate" | "rotate-texture" | "checker-zoom" | "mixed". */
VSR_API vsr_status vsr_synth_dataset(const char* out_root, const char* kind, int sequences,
                                     int frames, int height, int width, uint64_t seed);

/* -------------------------------------------------------------- evaluation */

/* Compares PNG frames in pred_dir against gt_dir. channel: "luma" | "rgb".
 * text_out/kv_out (either may be NULL) receive the human-readable table and
 * the machine-readable key-value report; free with vsr_string_free. */
VSR_API vsr_status vsr_eval_dirs(const char* pred_dir, const char* gt_dir, int border,
                                 int skip_head, int skip_tail, const char* channel, char** text_out,
                                 char** kv_out, double* mean_psnr, double* mean_ssim);

/* -------------------------------------------------------------- validation */

/* Finite-difference gradient audit. module: "deform" | "tensor" | "all".
 * all_pass receives 1/0 and report_out the per-op table; either may be NULL,
 * the status alone reports the outcome. A failed check returns
 * VSR_ERR_NUMERIC (outputs still filled). */
VSR_API vsr_status vsr_gradcheck(const char* module, uint64_t seed, char** report_out,
                                 int* all_pass);

/* Invoked after every training step of a long-running call. */
typedef void (*vsr_progress_fn)(const char* label, int64_t step, int64_t total_steps, double loss,
                                void* user);

/* Trains every requested variant on identical data and seed, then reports
 * final validation PSNR per variant plus a bicubic-upscaling baseline row.
 * variants: comma list from {sisr, mfsr, d2, d3, d4, d5}. steps > 0 overrides
 * the config's step budget. table_out receives the comparison table; each
 * variant's final checkpoint lands in config's checkpoint_dir. progress may
 * be NULL. */
VSR_API vsr_status vsr_ablate(const char* config_json, const char* variants, int64_t steps,
                              vsr_progress_fn progress, void* user, char** table_out);

#ifdef __cplusplus
}
#endif

#endif /* VSR_C_API_H */
