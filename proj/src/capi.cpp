// Copyright 2026 The lazypca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lazypca/lazypca.h"

#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "lazypca/core.hpp"
#include "lazypca/metrics.hpp"
#include "lazypca/pgm.hpp"
#include "lazypca/samplers.hpp"
#include "lazypca/synthesis.hpp"

struct lzp_image {
  lazypca::LevelImage image;
};

struct lzp_trace {
  std::vector<lazypca::TransitionRecord> records;
};

namespace {

thread_local std::string g_last_error;

lzp_status set_error(lzp_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, mapping exceptions onto status codes and the thread's message.
template <class Fn>
lzp_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    fn();
    return LZP_OK;
  } catch (const lazypca::Error& e) {
    switch (e.kind()) {
      case lazypca::ErrorKind::Io: return set_error(LZP_ERR_IO, e.what());
      case lazypca::ErrorKind::TooLarge: return set_error(LZP_ERR_TOO_LARGE, e.what());
      case lazypca::ErrorKind::InvalidArgument: break;
    }
    return set_error(LZP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LZP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LZP_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(LZP_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) lazypca::fail(message);
}

lazypca::AnnealSchedule to_schedule(const lzp_schedule& s) {
  return {s.beta0, s.increment, s.period, s.total_steps};
}

}  // namespace

extern "C" {

const char* lzp_last_error(void) { return g_last_error.c_str(); }
const char* lzp_version(void) { return "1.0.0"; }

lzp_status lzp_image_create(uint32_t width, uint32_t height, uint32_t levels, lzp_image** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new lzp_image{lazypca::LevelImage({width, height}, levels)};
  });
}

lzp_status lzp_image_from_levels(uint32_t width, uint32_t height, uint32_t levels, const uint16_t* data, size_t count,
                                 lzp_image** out) {
  return guarded([&] {
    require(out != nullptr && data != nullptr, "null argument");
    require(count == static_cast<size_t>(width) * height, "count must equal width * height");
    *out = new lzp_image{lazypca::LevelImage({width, height}, levels, std::vector<lazypca::Level>(data, data + count))};
  });
}

lzp_status lzp_image_clone(const lzp_image* image, lzp_image** out) {
  return guarded([&] {
    require(image != nullptr && out != nullptr, "null argument");
    *out = new lzp_image{image->image};
  });
}

void lzp_image_destroy(lzp_image* image) { delete image; }

uint32_t lzp_image_width(const lzp_image* image) { return image ? static_cast<uint32_t>(image->image.width()) : 0; }
uint32_t lzp_image_height(const lzp_image* image) { return image ? static_cast<uint32_t>(image->image.height()) : 0; }
uint32_t lzp_image_levels(const lzp_image* image) { return image ? image->image.levels() : 0; }

lzp_status lzp_image_copy_levels(const lzp_image* image, uint16_t* out, size_t count) {
  return guarded([&] {
    require(image != nullptr && out != nullptr, "null argument");
    require(count == image->image.size(), "count must equal width * height");
    const auto data = image->image.data();
    std::copy(data.begin(), data.end(), out);
  });
}

uint64_t lzp_image_hash(const lzp_image* image) { return image ? image->image.content_hash() : 0; }

int lzp_image_equal(const lzp_image* a, const lzp_image* b) {
  return a != nullptr && b != nullptr && a->image == b->image ? 1 : 0;
}

lzp_status lzp_image_read_pgm(const char* path, lzp_image** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new lzp_image{lazypca::read_pgm(std::filesystem::path(path))};
  });
}

lzp_status lzp_image_write_pgm(const lzp_image* image, const char* path) {
  return guarded([&] {
    require(image != nullptr && path != nullptr, "null argument");
    lazypca::write_pgm(std::filesystem::path(path), image->image);
  });
}

lzp_status lzp_image_write_pgm8(const lzp_image* image, const char* path) {
  return guarded([&] {
    require(image != nullptr && path != nullptr, "null argument");
    lazypca::write_pgm8(std::filesystem::path(path), image->image);
  });
}

void lzp_mrf_options_default(lzp_mrf_options* options) {
  if (options == nullptr) return;
  const lazypca::MrfGenSpec spec;
  *options = {static_cast<uint32_t>(spec.dims.width),
              static_cast<uint32_t>(spec.dims.height),
              spec.levels,
              spec.coupling,
              {spec.schedule.beta0, spec.schedule.increment, spec.schedule.period, spec.schedule.total_steps},
              spec.seed};
}

lzp_status lzp_generate_mrf(const lzp_mrf_options* options, lzp_image** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr, "null argument");
    lazypca::MrfGenSpec spec;
    spec.dims = {options->width, options->height};
    spec.levels = options->levels;
    spec.coupling = options->coupling;
    spec.schedule = to_schedule(options->schedule);
    spec.seed = options->seed;
    *out = new lzp_image{lazypca::generate_mrf(spec)};
  });
}

lzp_status lzp_degrade(const lzp_image* image, double sigma, uint64_t seed, uint32_t threads, lzp_image** out) {
  return guarded([&] {
    require(image != nullptr && out != nullptr, "null argument");
    lazypca::WorkerPool pool(threads);
    *out = new lzp_image{lazypca::degrade(image->image, lazypca::NoiseModel{0.0, sigma}, seed, pool)};
  });
}

void lzp_denoise_options_default(lzp_denoise_options* options) {
  if (options == nullptr) return;
  const lazypca::AnnealSchedule schedule;
  const lazypca::PcaParams pca;
  *options = {LZP_METHOD_GIBBS,
              lazypca::PriorParams{}.coupling,
              lazypca::NoiseModel{}.sigma,
              {schedule.beta0, schedule.increment, schedule.period, schedule.total_steps},
              pca.inertia,
              pca.norm_exponent,
              LZP_PCA_KERNEL_CONSISTENT,
              1,
              1,
              nullptr,
              nullptr};
}

lzp_status lzp_denoise(const lzp_image* noisy, const lzp_denoise_options* options, lzp_image** out,
                       lzp_trace** trace) {
  return guarded([&] {
    require(noisy != nullptr && options != nullptr && out != nullptr, "null argument");
    require(options->method == LZP_METHOD_GIBBS || options->method == LZP_METHOD_PCA, "unknown method");
    require(options->kernel == LZP_PCA_KERNEL_CONSISTENT || options->kernel == LZP_PCA_KERNEL_FULL,
            "unknown PCA kernel");
    const lazypca::PriorParams prior{options->coupling};
    const lazypca::NoiseModel noise{0.0, options->sigma};
    lazypca::ChainOptions chain;
    chain.method = options->method == LZP_METHOD_PCA ? lazypca::Method::Pca : lazypca::Method::Gibbs;
    if (chain.method == lazypca::Method::Pca) {
      chain.pca = lazypca::PcaParams{options->inertia, options->norm_exponent,
                                     options->kernel == LZP_PCA_KERNEL_FULL ? lazypca::PcaKernel::Full
                                                                            : lazypca::PcaKernel::Consistent};
    }
    chain.seed = options->seed;
    chain.threads = options->threads;
    if (options->on_step != nullptr) {
      chain.on_step = [options](std::uint32_t step, const lazypca::LevelImage& state) {
        const lzp_image view{state};
        options->on_step(options->user, step, &view);
      };
    }
    auto result = lazypca::run_chain(noisy->image, noisy->image, prior, noise, to_schedule(options->schedule), chain);
    auto* image = new lzp_image{std::move(result.final_image)};
    if (trace != nullptr) {
      try {
        *trace = new lzp_trace{std::move(result.trace)};
      } catch (...) {
        delete image;
        throw;
      }
    }
    *out = image;
  });
}

size_t lzp_trace_size(const lzp_trace* trace) { return trace ? trace->records.size() : 0; }

lzp_status lzp_trace_get(const lzp_trace* trace, size_t index, lzp_transition_record* out) {
  return guarded([&] {
    require(trace != nullptr && out != nullptr, "null argument");
    require(index < trace->records.size(), "trace index out of range");
    const auto& r = trace->records[index];
    *out = {r.step, r.beta, r.changed_sites, r.beta_posterior_energy};
  });
}

lzp_status lzp_trace_write_csv(const lzp_trace* trace, const char* path) {
  return guarded([&] {
    require(trace != nullptr && path != nullptr, "null argument");
    std::ofstream out(path);
    if (!out) throw lazypca::Error(lazypca::ErrorKind::Io, std::string("cannot open ") + path);
    out.precision(17);
    out << "step,beta,changed_sites,beta_Hg\n";
    for (const auto& r : trace->records)
      out << r.step << ',' << r.beta << ',' << r.changed_sites << ',' << r.beta_posterior_energy << '\n';
    out.close();
    if (!out) throw lazypca::Error(lazypca::ErrorKind::Io, std::string("error writing ") + path);
  });
}

void lzp_trace_destroy(lzp_trace* trace) { delete trace; }

lzp_status lzp_evaluate(const lzp_image* original, const lzp_image* other, double c1, double c2, lzp_metrics* out) {
  return guarded([&] {
    require(original != nullptr && other != nullptr && out != nullptr, "null argument");
    lazypca::SsimConstants constants;
    if (c1 > 0.0) constants.c1 = c1;
    if (c2 > 0.0) constants.c2 = c2;
    const auto report = lazypca::evaluate(original->image, other->image, constants);
    *out = {report.mse, report.psnr, report.ssim, report.psnr_is_infinite() ? 1 : 0};
  });
}

lzp_status lzp_bench_kernel(const lzp_image* image, lzp_method method, uint32_t threads, uint32_t steps, uint64_t seed,
                            lzp_bench_result* out) {
  return guarded([&] {
    require(image != nullptr && out != nullptr, "null argument");
    const lazypca::PriorParams prior;
    const lazypca::NoiseModel noise;
    const lazypca::Kernel kernel(image->image, prior, noise);
    const lazypca::PcaParams pca;
    const double beta = lazypca::AnnealSchedule{}.beta0;
    lazypca::WorkerPool pool(method == LZP_METHOD_PCA ? threads : 1);
    lazypca::LevelImage current = image->image;
    lazypca::LevelImage next = image->image;
    const auto start = std::chrono::steady_clock::now();
    for (uint32_t t = 0; t < steps; ++t) {
      if (method == LZP_METHOD_PCA) {
        lazypca::pca_step_into(current, next, kernel.scorer(), pca, beta, seed, t, pool);
        std::swap(current, next);
      } else {
        lazypca::gibbs_sweep_in_place(current, kernel.scorer(), beta, seed, lazypca::Stage::Gibbs, t);
      }
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    *out = {elapsed.count(), static_cast<uint64_t>(steps) * image->image.size()};
  });
}

}  // extern "C"
