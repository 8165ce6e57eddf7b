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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "lazypca/lazypca.h"

namespace {

struct ImageDeleter {
  void operator()(lzp_image* p) const { lzp_image_destroy(p); }
};
struct TraceDeleter {
  void operator()(lzp_trace* p) const { lzp_trace_destroy(p); }
};
using Image = std::unique_ptr<lzp_image, ImageDeleter>;
using Trace = std::unique_ptr<lzp_trace, TraceDeleter>;

Image make_mrf(std::uint32_t size, std::uint32_t levels, std::uint64_t seed) {
  lzp_mrf_options o;
  lzp_mrf_options_default(&o);
  o.width = o.height = size;
  o.levels = levels;
  o.seed = seed;
  lzp_image* out = nullptr;
  REQUIRE(lzp_generate_mrf(&o, &out) == LZP_OK);
  return Image(out);
}

std::vector<std::uint16_t> levels_of(const lzp_image* image) {
  std::vector<std::uint16_t> v(static_cast<std::size_t>(lzp_image_width(image)) * lzp_image_height(image));
  REQUIRE(lzp_image_copy_levels(image, v.data(), v.size()) == LZP_OK);
  return v;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lazypca_capi_" + name);
}

}  // namespace

TEST_CASE("image handles") {
  lzp_image* raw = nullptr;
  const std::vector<std::uint16_t> data{0, 1, 2, 3, 4, 0};
  REQUIRE(lzp_image_from_levels(3, 2, 5, data.data(), data.size(), &raw) == LZP_OK);
  Image image(raw);
  CHECK(lzp_image_width(image.get()) == 3);
  CHECK(lzp_image_height(image.get()) == 2);
  CHECK(lzp_image_levels(image.get()) == 5);
  CHECK(levels_of(image.get()) == data);

  REQUIRE(lzp_image_clone(image.get(), &raw) == LZP_OK);
  Image copy(raw);
  CHECK(lzp_image_equal(image.get(), copy.get()) == 1);
  CHECK(lzp_image_hash(image.get()) == lzp_image_hash(copy.get()));

  REQUIRE(lzp_image_create(3, 2, 5, &raw) == LZP_OK);
  Image blank(raw);
  CHECK(lzp_image_equal(image.get(), blank.get()) == 0);
  CHECK(lzp_image_hash(image.get()) != lzp_image_hash(blank.get()));
  CHECK(levels_of(blank.get()) == std::vector<std::uint16_t>(6, 0));
}

TEST_CASE("errors map to status codes") {
  lzp_image* raw = nullptr;
  const std::vector<std::uint16_t> bad{0, 9};
  CHECK(lzp_image_from_levels(2, 1, 5, bad.data(), bad.size(), &raw) == LZP_ERR_INVALID_ARGUMENT);
  CHECK(std::string(lzp_last_error()).size() > 0);
  CHECK(raw == nullptr);
  CHECK(lzp_image_from_levels(2, 2, 5, bad.data(), bad.size(), &raw) == LZP_ERR_INVALID_ARGUMENT);
  CHECK(lzp_image_create(2, 2, 0, &raw) == LZP_ERR_INVALID_ARGUMENT);
  CHECK(lzp_image_create(2, 2, 5, nullptr) == LZP_ERR_INVALID_ARGUMENT);
  CHECK(lzp_image_read_pgm("/nonexistent/dir/x.pgm", &raw) == LZP_ERR_IO);
  CHECK(lzp_image_create(2, 2, 5, &raw) == LZP_OK);
  CHECK(std::string(lzp_last_error()).empty());
  Image ok(raw);
  CHECK(lzp_image_write_pgm(ok.get(), "/nonexistent/dir/x.pgm") == LZP_ERR_IO);

  lzp_denoise_options opts;
  lzp_denoise_options_default(&opts);
  opts.sigma = -1.0;
  CHECK(lzp_denoise(ok.get(), &opts, &raw, nullptr) == LZP_ERR_INVALID_ARGUMENT);
  lzp_denoise_options_default(&opts);
  opts.method = static_cast<lzp_method>(7);
  CHECK(lzp_denoise(ok.get(), &opts, &raw, nullptr) == LZP_ERR_INVALID_ARGUMENT);

  lzp_image_destroy(nullptr);
  lzp_trace_destroy(nullptr);
  CHECK(lzp_image_width(nullptr) == 0);
}

TEST_CASE("defaults") {
  lzp_mrf_options m;
  lzp_mrf_options_default(&m);
  CHECK(m.width == 64);
  CHECK(m.height == 64);
  CHECK(m.levels == 5);
  CHECK(m.coupling == doctest::Approx(1.0 / 3.0));
  CHECK(m.schedule.beta0 == 0.4);
  CHECK(m.schedule.increment == 0.1);
  CHECK(m.schedule.period == 50);
  CHECK(m.schedule.total_steps == 400);

  lzp_denoise_options d;
  lzp_denoise_options_default(&d);
  CHECK(d.method == LZP_METHOD_GIBBS);
  CHECK(d.sigma == 0.25);
  CHECK(d.schedule.beta0 == 1.25);
  CHECK(d.schedule.increment == 0.25);
  CHECK(d.schedule.period == 250);
  CHECK(d.schedule.total_steps == 1000);
  CHECK(d.inertia == 0.51);
  CHECK(d.norm_exponent == 0.0);
  CHECK(d.kernel == LZP_PCA_KERNEL_CONSISTENT);
  CHECK(std::string(lzp_version()) == "1.0.0");
}

TEST_CASE("PGM round trip through the C API") {
  const Image x = make_mrf(20, 33, 4);
  const auto path = temp_path("roundtrip.pgm");
  REQUIRE(lzp_image_write_pgm(x.get(), path.c_str()) == LZP_OK);
  lzp_image* raw = nullptr;
  REQUIRE(lzp_image_read_pgm(path.c_str(), &raw) == LZP_OK);
  Image back(raw);
  CHECK(lzp_image_equal(x.get(), back.get()) == 1);
  const auto view = temp_path("view.pgm");
  CHECK(lzp_image_write_pgm8(x.get(), view.c_str()) == LZP_OK);
  std::ifstream in(view, std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  CHECK(magic == "P5");
  CHECK(maxval == 255);
  std::filesystem::remove(path);
  std::filesystem::remove(view);
}

TEST_CASE("denoise through the C API") {
  const Image x = make_mrf(32, 5, 2);
  lzp_image* raw = nullptr;
  REQUIRE(lzp_degrade(x.get(), 0.25, 102, 2, &raw) == LZP_OK);
  const Image g(raw);

  lzp_denoise_options opts;
  lzp_denoise_options_default(&opts);
  opts.schedule.total_steps = 0;
  REQUIRE(lzp_denoise(g.get(), &opts, &raw, nullptr) == LZP_OK);
  CHECK(lzp_image_equal(Image(raw).get(), g.get()) == 1);

  opts.method = LZP_METHOD_PCA;
  opts.schedule = {1.25, 0.25, 25, 100};
  struct Seen {
    std::uint32_t calls = 0;
    std::uint32_t last = 0;
  } seen;
  opts.on_step = [](void* user, std::uint32_t step, const lzp_image* state) {
    auto* s = static_cast<Seen*>(user);
    ++s->calls;
    s->last = step;
    CHECK(lzp_image_width(state) == 32);
  };
  opts.user = &seen;
  lzp_trace* traw = nullptr;
  REQUIRE(lzp_denoise(g.get(), &opts, &raw, &traw) == LZP_OK);
  const Image restored(raw);
  const Trace trace(traw);
  CHECK(seen.calls == 100);
  CHECK(seen.last == 100);
  REQUIRE(lzp_trace_size(trace.get()) == 100);
  lzp_transition_record rec;
  REQUIRE(lzp_trace_get(trace.get(), 99, &rec) == LZP_OK);
  CHECK(rec.step == 99);
  CHECK(rec.beta == 2.0);
  CHECK(rec.changed_sites <= 32 * 32);
  CHECK(lzp_trace_get(trace.get(), 100, &rec) == LZP_ERR_INVALID_ARGUMENT);

  lzp_metrics before, after;
  REQUIRE(lzp_evaluate(x.get(), g.get(), 0, 0, &before) == LZP_OK);
  REQUIRE(lzp_evaluate(x.get(), restored.get(), 0, 0, &after) == LZP_OK);
  CHECK(after.psnr > before.psnr);
  CHECK(after.psnr_infinite == 0);

  opts.threads = 4;
  opts.on_step = nullptr;
  REQUIRE(lzp_denoise(g.get(), &opts, &raw, nullptr) == LZP_OK);
  CHECK(lzp_image_equal(Image(raw).get(), restored.get()) == 1);

  const auto csv = temp_path("trace.csv");
  REQUIRE(lzp_trace_write_csv(trace.get(), csv.c_str()) == LZP_OK);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,beta,changed_sites,beta_Hg");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 100);
  std::filesystem::remove(csv);
}

TEST_CASE("evaluate through the C API") {
  const Image x = make_mrf(16, 5, 3);
  lzp_metrics m;
  REQUIRE(lzp_evaluate(x.get(), x.get(), 0, 0, &m) == LZP_OK);
  CHECK(m.psnr_infinite == 1);
  CHECK(std::isinf(m.psnr));
  CHECK(m.ssim == 1.0);
  const Image other = make_mrf(17, 5, 3);
  CHECK(lzp_evaluate(x.get(), other.get(), 0, 0, &m) == LZP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("bench accounting") {
  const Image x = make_mrf(24, 5, 1);
  lzp_bench_result r;
  REQUIRE(lzp_bench_kernel(x.get(), LZP_METHOD_PCA, 1, 3, 1, &r) == LZP_OK);
  CHECK(r.site_updates == 3 * 24 * 24);
  CHECK(r.seconds >= 0.0);
  REQUIRE(lzp_bench_kernel(x.get(), LZP_METHOD_GIBBS, 1, 2, 1, &r) == LZP_OK);
  CHECK(r.site_updates == 2 * 24 * 24);
}
