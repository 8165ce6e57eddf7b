/*
 * Copyright 2026 The lazypca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to liblazypca: Bayesian denoising of gray-level images with a
 * systematic Gibbs sampler or a lazy probabilistic cellular automaton.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns lzp_status; on
 * failure lzp_last_error() describes the problem for the calling thread.
 */

#ifndef LAZYPCA_H_
#define LAZYPCA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  ifdef LAZYPCA_BUILDING
#    define LZP_API __declspec(dllexport)
#  else
#    define LZP_API __declspec(dllimport)
#  endif
#else
#  define LZP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lzp_status {
  LZP_OK = 0,
  LZP_ERR_INVALID_ARGUMENT = 1,
  LZP_ERR_IO = 2,
  LZP_ERR_TOO_LARGE = 3,
  LZP_ERR_INTERNAL = 4
} lzp_status;

typedef enum lzp_method { LZP_METHOD_GIBBS = 0, LZP_METHOD_PCA = 1 } lzp_method;

typedef enum lzp_pca_kernel { LZP_PCA_KERNEL_CONSISTENT = 0, LZP_PCA_KERNEL_FULL = 1 } lzp_pca_kernel;

typedef struct lzp_image lzp_image;
typedef struct lzp_trace lzp_trace;

/* Message for the last failed call on this thread ("" if none). */
LZP_API const char* lzp_last_error(void);
LZP_API const char* lzp_version(void);

/* ---- images ---------------------------------------------------------- */

/* All pixels at level 0. levels >= 1. */
LZP_API lzp_status lzp_image_create(uint32_t width, uint32_t height, uint32_t levels, lzp_image** out);
/* `data` holds width*height level indices in column-major order. */
LZP_API lzp_status lzp_image_from_levels(uint32_t width, uint32_t height, uint32_t levels,
                                         const uint16_t* data, size_t count, lzp_image** out);
LZP_API lzp_status lzp_image_clone(const lzp_image* image, lzp_image** out);
LZP_API void lzp_image_destroy(lzp_image* image);

LZP_API uint32_t lzp_image_width(const lzp_image* image);
LZP_API uint32_t lzp_image_height(const lzp_image* image);
LZP_API uint32_t lzp_image_levels(const lzp_image* image);
/* Copies the column-major level indices into `out` (count must equal width*height). */
LZP_API lzp_status lzp_image_copy_levels(const lzp_image* image, uint16_t* out, size_t count);
/* FNV-1a 64 content hash. */
LZP_API uint64_t lzp_image_hash(const lzp_image* image);
/* 1 when dimensions, levels and pixels agree. */
LZP_API int lzp_image_equal(const lzp_image* a, const lzp_image* b);

LZP_API lzp_status lzp_image_read_pgm(const char* path, lzp_image** out);
LZP_API lzp_status lzp_image_write_pgm(const lzp_image* image, const char* path);
LZP_API lzp_status lzp_image_write_pgm8(const lzp_image* image, const char* path);

/* ---- synthesis ------------------------------------------------------- */

typedef struct lzp_schedule {
  double beta0;
  double increment;
  uint32_t period;
  uint32_t total_steps;
} lzp_schedule;

typedef struct lzp_mrf_options {
  uint32_t width;
  uint32_t height;
  uint32_t levels;
  double coupling;
  lzp_schedule schedule;
  uint64_t seed;
} lzp_mrf_options;

/* 64x64, 5 levels, J = 1/3, beta 0.4 +0.1 every 50 sweeps, 400 sweeps, seed 1. */
LZP_API void lzp_mrf_options_default(lzp_mrf_options* options);
LZP_API lzp_status lzp_generate_mrf(const lzp_mrf_options* options, lzp_image** out);

/* threads == 0 selects the machine's parallelism. */
LZP_API lzp_status lzp_degrade(const lzp_image* image, double sigma, uint64_t seed, uint32_t threads,
                               lzp_image** out);

/* ---- denoising ------------------------------------------------------- */

typedef void (*lzp_step_callback)(void* user, uint32_t step, const lzp_image* state);

typedef struct lzp_denoise_options {
  lzp_method method;
  double coupling;
  double sigma;
  lzp_schedule schedule;
  double inertia;
  double norm_exponent;
  lzp_pca_kernel kernel;
  uint64_t seed;
  uint32_t threads;
  lzp_step_callback on_step; /* optional */
  void* user;
} lzp_denoise_options;

/* Gibbs, J = 1/3, sigma = 0.25, beta 1.25 +0.25 every 250 steps, 1000 steps,
 * q = 0.51, p = 0, consistent kernel, seed 1, threads 1. */
LZP_API void lzp_denoise_options_default(lzp_denoise_options* options);

/* Runs the chain from `noisy` itself. `trace` may be NULL. */
LZP_API lzp_status lzp_denoise(const lzp_image* noisy, const lzp_denoise_options* options, lzp_image** out,
                               lzp_trace** trace);

typedef struct lzp_transition_record {
  uint32_t step;
  double beta;
  uint64_t changed_sites;
  double beta_posterior_energy;
} lzp_transition_record;

LZP_API size_t lzp_trace_size(const lzp_trace* trace);
LZP_API lzp_status lzp_trace_get(const lzp_trace* trace, size_t index, lzp_transition_record* out);
/* CSV with header step,beta,changed_sites,beta_Hg. */
LZP_API lzp_status lzp_trace_write_csv(const lzp_trace* trace, const char* path);
LZP_API void lzp_trace_destroy(lzp_trace* trace);

/* ---- metrics --------------------------------------------------------- */

typedef struct lzp_metrics {
  double mse;
  double psnr; /* +inf when mse == 0 */
  double ssim;
  int psnr_infinite;
} lzp_metrics;

/* c1, c2 <= 0 select the defaults (0.01^2, 0.03^2). */
LZP_API lzp_status lzp_evaluate(const lzp_image* original, const lzp_image* other, double c1, double c2,
                                lzp_metrics* out);

/* ---- benchmarking ---------------------------------------------------- */

typedef struct lzp_bench_result {
  double seconds;          /* wall clock for all steps */
  uint64_t site_updates;   /* total single-site updates performed */
} lzp_bench_result;

/* Times `steps` kernel applications on `image` at fixed beta. */
LZP_API lzp_status lzp_bench_kernel(const lzp_image* image, lzp_method method, uint32_t threads,
                                    uint32_t steps, uint64_t seed, lzp_bench_result* out);

#ifdef __cplusplus
}
#endif

#endif /* LAZYPCA_H_ */
