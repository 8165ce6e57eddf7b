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

// lazypca command line driver: generate, degrade, denoise, evaluate, bench.
// Every subcommand reads an optional JSON config (--config); flags override
// config values. Exit codes: 0 ok, 1 internal, 2 config, 3 I/O, 4 lineage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lazypca/lazypca.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitLineage = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw CliError{kExitConfig, message}; }
[[noreturn]] void io_error(const std::string& message) { throw CliError{kExitIo, message}; }

void check(lzp_status status, const std::string& context) {
  if (status == LZP_OK) return;
  const std::string message = context + ": " + lzp_last_error();
  switch (status) {
    case LZP_ERR_IO: throw CliError{kExitIo, message};
    case LZP_ERR_INVALID_ARGUMENT:
    case LZP_ERR_TOO_LARGE: throw CliError{kExitConfig, message};
    default: throw CliError{kExitInternal, message};
  }
}

struct ImageDeleter {
  void operator()(lzp_image* p) const { lzp_image_destroy(p); }
};
struct TraceDeleter {
  void operator()(lzp_trace* p) const { lzp_trace_destroy(p); }
};
using ImagePtr = std::unique_ptr<lzp_image, ImageDeleter>;
using TracePtr = std::unique_ptr<lzp_trace, TraceDeleter>;

std::string hex64(uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

// ---------------------------------------------------------------------------
// Config: the JSON file is merged with flag overrides into one object, then
// every key is read through a typed accessor. Leftover keys are an error.

class Config {
 public:
  Config(json values, std::set<std::string> allowed) : values_(std::move(values)), allowed_(std::move(allowed)) {
    if (!values_.is_object()) config_error("config must be a JSON object");
    for (const auto& [key, _] : values_.items())
      if (!allowed_.contains(key)) config_error("unknown config key '" + key + "'");
  }

  bool has(const std::string& key) const { return values_.contains(key) && !values_[key].is_null(); }
  bool is_explicit_null(const std::string& key) const { return values_.contains(key) && values_[key].is_null(); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    if (!values_[key].is_number()) config_error("'" + key + "' must be a number");
    return values_[key].get<double>();
  }

  uint64_t unsigned_int(const std::string& key, uint64_t fallback, uint64_t max = UINT32_MAX) const {
    if (!has(key)) return fallback;
    const auto& v = values_[key];
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && !v.is_number_unsigned()))
      config_error("'" + key + "' must be a nonnegative integer");
    const auto value = v.get<uint64_t>();
    if (value > max) config_error("'" + key + "' is too large");
    return value;
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!values_[key].is_string()) config_error("'" + key + "' must be a string");
    return values_[key].get<std::string>();
  }

  std::string required_path(const std::string& key) const {
    const std::string value = string(key, "");
    if (value.empty()) config_error("missing required '" + key + "'");
    return value;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!values_[key].is_boolean()) config_error("'" + key + "' must be true or false");
    return values_[key].get<bool>();
  }

  const json& raw(const std::string& key) const { return values_.at(key); }

 private:
  json values_;
  std::set<std::string> allowed_;
};

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) io_error("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("config " + path + " is not valid JSON: " + e.what());
  }
}

// Flag values collected by CLI11; only flags that were given override.
struct Overrides {
  std::vector<std::pair<std::string, std::function<json()>>> entries;

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, std::optional<T>& slot,
           const std::string& help) {
    app->add_option(flag, slot, help);
    entries.emplace_back(key, [&slot]() -> json { return slot ? json(*slot) : json(); });
  }

  void apply(json& config) const {
    for (const auto& [key, get] : entries) {
      json value = get();
      if (!value.is_null()) config[key] = std::move(value);
    }
  }
};

// ---------------------------------------------------------------------------
// Sidecars

fs::path sidecar_path(const fs::path& image) { return fs::path(image.string() + ".json"); }

std::optional<json> read_sidecar(const fs::path& image) {
  const fs::path path = sidecar_path(image);
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  if (!in) io_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    io_error("sidecar " + path.string() + " is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) io_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) io_error("error writing " + path.string());
}

json base_sidecar(const lzp_image* image, uint64_t seed) {
  return {{"format", "lazypca-sidecar/1"},
          {"width", lzp_image_width(image)},
          {"height", lzp_image_height(image)},
          {"levels", lzp_image_levels(image)},
          {"seed", seed},
          {"hash", hex64(lzp_image_hash(image))}};
}

// Ancestor hashes of an image, nearest first: its own parent, then the
// parent's lineage.
json child_lineage(const lzp_image* parent, const std::optional<json>& parent_sidecar) {
  json lineage = json::array({hex64(lzp_image_hash(parent))});
  if (parent_sidecar && parent_sidecar->contains("lineage"))
    for (const auto& h : (*parent_sidecar)["lineage"]) lineage.push_back(h);
  return lineage;
}

void write_image_with_sidecar(const lzp_image* image, const fs::path& path, const json& sidecar,
                              const std::string& view) {
  check(lzp_image_write_pgm(image, path.string().c_str()), "writing " + path.string());
  write_text(sidecar_path(path), sidecar.dump(2) + "\n");
  if (!view.empty()) check(lzp_image_write_pgm8(image, view.c_str()), "writing " + view);
}

ImagePtr read_image(const std::string& path) {
  if (!fs::exists(path)) io_error("input image " + path + " does not exist");
  lzp_image* raw = nullptr;
  check(lzp_image_read_pgm(path.c_str(), &raw), "reading " + path);
  return ImagePtr(raw);
}

lzp_schedule read_schedule(const Config& c, const lzp_schedule& defaults) {
  lzp_schedule s;
  s.beta0 = c.number("beta0", defaults.beta0);
  s.increment = c.number("beta_increment", defaults.increment);
  s.period = static_cast<uint32_t>(c.unsigned_int("beta_period", defaults.period));
  s.total_steps = static_cast<uint32_t>(c.unsigned_int("steps", defaults.total_steps));
  if (!(s.beta0 > 0.0)) config_error("'beta0' must be positive");
  if (!(s.increment >= 0.0)) config_error("'beta_increment' must be nonnegative");
  if (s.period == 0) config_error("'beta_period' must be positive");
  return s;
}

json schedule_json(const lzp_schedule& s) {
  return {{"beta0", s.beta0}, {"beta_increment", s.increment}, {"beta_period", s.period}, {"steps", s.total_steps}};
}

uint32_t read_threads(const Config& c) {
  const auto threads = static_cast<uint32_t>(c.unsigned_int("threads", 0, 4096));
  return threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenerateFlags {
  std::optional<uint32_t> width, height, size, levels, beta_period, steps;
  std::optional<double> coupling, beta0, beta_increment;
  std::optional<uint64_t> seed;
  std::optional<std::string> output, view;
};

int cmd_generate(const json& merged) {
  const Config c(merged, {"width", "height", "size", "levels", "coupling", "beta0", "beta_increment", "beta_period",
                          "steps", "seed", "output", "view"});
  lzp_mrf_options options;
  lzp_mrf_options_default(&options);
  if (c.has("size")) options.width = options.height = static_cast<uint32_t>(c.unsigned_int("size", 0));
  options.width = static_cast<uint32_t>(c.unsigned_int("width", options.width));
  options.height = static_cast<uint32_t>(c.unsigned_int("height", options.height));
  options.levels = static_cast<uint32_t>(c.unsigned_int("levels", options.levels, 65536));
  options.coupling = c.number("coupling", options.coupling);
  options.schedule = read_schedule(c, options.schedule);
  options.seed = c.unsigned_int("seed", options.seed, UINT64_MAX);
  const std::string output = c.required_path("output");
  if (options.width == 0 || options.height == 0) config_error("image size must be positive");
  if (options.levels < 2) config_error("'levels' must be at least 2");
  if (!(options.coupling > 0.0)) config_error("'coupling' must be positive");

  lzp_image* raw = nullptr;
  check(lzp_generate_mrf(&options, &raw), "generate");
  const ImagePtr image(raw);
  json sidecar = base_sidecar(image.get(), options.seed);
  sidecar["lineage"] = json::array();
  sidecar["provenance"] = {{"command", "generate"}, {"coupling", options.coupling},
                           {"schedule", schedule_json(options.schedule)}};
  write_image_with_sidecar(image.get(), output, sidecar, c.string("view", ""));
  return 0;
}

struct DegradeFlags {
  std::optional<std::string> input, output, view;
  std::optional<double> sigma;
  std::optional<uint64_t> seed;
  std::optional<uint32_t> threads;
};

int cmd_degrade(const json& merged) {
  const Config c(merged, {"input", "output", "sigma", "seed", "threads", "view"});
  const std::string input = c.required_path("input");
  const std::string output = c.required_path("output");
  const double sigma = c.number("sigma", 0.25);
  const uint64_t seed = c.unsigned_int("seed", 1, UINT64_MAX);
  if (!(sigma > 0.0)) config_error("'sigma' must be positive");
  const uint32_t threads = read_threads(c);

  const ImagePtr original = read_image(input);
  lzp_image* raw = nullptr;
  check(lzp_degrade(original.get(), sigma, seed, threads, &raw), "degrade");
  const ImagePtr noisy(raw);
  json sidecar = base_sidecar(noisy.get(), seed);
  sidecar["sigma"] = sigma;
  sidecar["lineage"] = child_lineage(original.get(), read_sidecar(input));
  sidecar["provenance"] = {{"command", "degrade"}, {"input", input}, {"input_hash", hex64(lzp_image_hash(original.get()))}};
  write_image_with_sidecar(noisy.get(), output, sidecar, c.string("view", ""));
  return 0;
}

struct DenoiseFlags {
  std::optional<std::string> input, output, method, kernel, trace, checkpoint_dir, view;
  std::optional<uint32_t> steps, beta_period, threads, checkpoint_every;
  std::optional<double> beta0, beta_increment, coupling, sigma, q, p;
  std::optional<uint64_t> seed;
};

struct CheckpointState {
  fs::path dir;
  uint32_t every = 0;
  std::string failure;
};

void write_checkpoint(void* user, uint32_t step, const lzp_image* state) {
  auto* cp = static_cast<CheckpointState*>(user);
  if (cp->every == 0 || step % cp->every != 0 || !cp->failure.empty()) return;
  std::ostringstream name;
  name << "step_" << std::setw(6) << std::setfill('0') << step << ".pgm";
  const fs::path path = cp->dir / name.str();
  if (lzp_image_write_pgm(state, path.string().c_str()) != LZP_OK) cp->failure = lzp_last_error();
}

int cmd_denoise(const json& merged) {
  const Config c(merged, {"input", "output", "method", "steps", "beta0", "beta_increment", "beta_period", "coupling",
                          "sigma", "q", "p", "kernel", "seed", "threads", "trace", "checkpoint_every",
                          "checkpoint_dir", "view"});
  const std::string input = c.required_path("input");
  const std::string output = c.required_path("output");
  const std::optional<json> input_sidecar = read_sidecar(input);

  lzp_denoise_options options;
  lzp_denoise_options_default(&options);
  const std::string method = c.string("method", "gibbs");
  if (method == "gibbs") {
    options.method = LZP_METHOD_GIBBS;
  } else if (method == "pca") {
    options.method = LZP_METHOD_PCA;
  } else {
    config_error("'method' must be gibbs or pca, got '" + method + "'");
  }
  if (options.method == LZP_METHOD_PCA && c.is_explicit_null("q")) config_error("method pca requires 'q'");
  options.inertia = c.number("q", options.inertia);
  options.norm_exponent = c.number("p", options.norm_exponent);
  if (!(options.inertia >= 0.0)) config_error("'q' must be nonnegative");
  if (options.norm_exponent != 0.0) config_error("only 'p' = 0 (L0 inertia) is supported");
  const std::string kernel = c.string("kernel", "consistent");
  if (kernel == "consistent") {
    options.kernel = LZP_PCA_KERNEL_CONSISTENT;
  } else if (kernel == "full") {
    options.kernel = LZP_PCA_KERNEL_FULL;
  } else {
    config_error("'kernel' must be consistent or full");
  }

  double sigma_default = options.sigma;
  if (input_sidecar && input_sidecar->contains("sigma") && (*input_sidecar)["sigma"].is_number())
    sigma_default = (*input_sidecar)["sigma"].get<double>();
  options.sigma = c.number("sigma", sigma_default);
  options.coupling = c.number("coupling", options.coupling);
  if (!(options.sigma > 0.0)) config_error("'sigma' must be positive");
  if (!(options.coupling > 0.0)) config_error("'coupling' must be positive");
  options.schedule = read_schedule(c, options.schedule);
  options.seed = c.unsigned_int("seed", options.seed, UINT64_MAX);
  options.threads = read_threads(c);
  if (options.method == LZP_METHOD_GIBBS && options.threads > 1) {
    std::cerr << "warning: the gibbs sampler is sequential; running on 1 thread\n";
    options.threads = 1;
  }

  CheckpointState checkpoints;
  checkpoints.every = static_cast<uint32_t>(c.unsigned_int("checkpoint_every", 0));
  if (checkpoints.every > 0) {
    checkpoints.dir = c.string("checkpoint_dir", "checkpoints");
    std::error_code ec;
    fs::create_directories(checkpoints.dir, ec);
    if (ec) io_error("cannot create checkpoint directory " + checkpoints.dir.string());
    options.on_step = write_checkpoint;
    options.user = &checkpoints;
  }

  const ImagePtr noisy = read_image(input);
  lzp_image* raw_out = nullptr;
  lzp_trace* raw_trace = nullptr;
  check(lzp_denoise(noisy.get(), &options, &raw_out, &raw_trace), "denoise");
  const ImagePtr restored(raw_out);
  const TracePtr trace(raw_trace);
  if (!checkpoints.failure.empty()) io_error("checkpoint: " + checkpoints.failure);

  const std::string trace_path = c.string("trace", "");
  if (!trace_path.empty()) check(lzp_trace_write_csv(trace.get(), trace_path.c_str()), "writing trace");

  json sidecar = base_sidecar(restored.get(), options.seed);
  sidecar["lineage"] = child_lineage(noisy.get(), input_sidecar);
  json provenance = {{"command", "denoise"},
                     {"input", input},
                     {"input_hash", hex64(lzp_image_hash(noisy.get()))},
                     {"method", method},
                     {"initial_state", "observed"},
                     {"coupling", options.coupling},
                     {"sigma", options.sigma},
                     {"schedule", schedule_json(options.schedule)},
                     {"threads", options.threads}};
  if (options.method == LZP_METHOD_PCA) {
    provenance["q"] = options.inertia;
    provenance["p"] = options.norm_exponent;
    provenance["kernel"] = kernel;
  }
  sidecar["provenance"] = provenance;
  write_image_with_sidecar(restored.get(), output, sidecar, c.string("view", ""));
  return 0;
}

struct EvaluateFlags {
  std::optional<std::string> original, restored, noisy, image_id, algo, json_path;
  std::optional<double> c1, c2;
  std::optional<bool> force;
};

// True when the sidecar's image is `hash` itself or descends from it.
bool lineage_contains(const json& sidecar, const std::string& hash) {
  if (sidecar.value("hash", std::string()) == hash) return true;
  if (!sidecar.contains("lineage") || !sidecar["lineage"].is_array()) return false;
  for (const auto& h : sidecar["lineage"])
    if (h == hash) return true;
  return false;
}

std::string format_psnr(const lzp_metrics& m) {
  if (m.psnr_infinite) return "inf";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << m.psnr;
  return out.str();
}

json metrics_json(const lzp_metrics& m) {
  return {{"mse", m.mse}, {"psnr", m.psnr_infinite ? json("inf") : json(m.psnr)}, {"ssim", m.ssim}};
}

int cmd_evaluate(const json& merged) {
  const Config c(merged, {"original", "restored", "noisy", "image_id", "algo", "c1", "c2", "json", "force"});
  const std::string original_path = c.required_path("original");
  const std::string restored_path = c.required_path("restored");
  const std::string noisy_path = c.string("noisy", "");
  const bool force = c.boolean("force", false);
  const double c1 = c.number("c1", 0.01 * 0.01);
  const double c2 = c.number("c2", 0.03 * 0.03);

  const ImagePtr original = read_image(original_path);
  const ImagePtr restored = read_image(restored_path);
  ImagePtr noisy;
  if (!noisy_path.empty()) noisy = read_image(noisy_path);

  // Lineage: every sidecar must describe its own file, and the restored
  // image must descend from the original (and from the noisy one if given).
  const std::string original_hash = hex64(lzp_image_hash(original.get()));
  std::vector<std::string> problems;
  auto verify_self = [&](const std::optional<json>& sidecar, const lzp_image* image, const std::string& path) {
    if (!sidecar) {
      std::cerr << "warning: no sidecar for " << path << "; lineage not verified\n";
      return;
    }
    if (sidecar->value("hash", std::string()) != hex64(lzp_image_hash(image)))
      problems.push_back("sidecar of " + path + " does not match its image");
  };
  const auto original_sidecar = read_sidecar(original_path);
  const auto restored_sidecar = read_sidecar(restored_path);
  const std::optional<json> noisy_sidecar = noisy ? read_sidecar(noisy_path) : std::nullopt;
  verify_self(original_sidecar, original.get(), original_path);
  verify_self(restored_sidecar, restored.get(), restored_path);
  if (noisy) verify_self(noisy_sidecar, noisy.get(), noisy_path);
  if (restored_sidecar && !lineage_contains(*restored_sidecar, original_hash))
    problems.push_back(restored_path + " does not descend from " + original_path);
  if (noisy) {
    const std::string noisy_hash = hex64(lzp_image_hash(noisy.get()));
    if (restored_sidecar && !lineage_contains(*restored_sidecar, noisy_hash))
      problems.push_back(restored_path + " does not descend from " + noisy_path);
    if (noisy_sidecar && !lineage_contains(*noisy_sidecar, original_hash))
      problems.push_back(noisy_path + " does not descend from " + original_path);
  }
  if (!problems.empty()) {
    for (const auto& p : problems) std::cerr << (force ? "warning: " : "error: ") << p << "\n";
    if (!force) return kExitLineage;
  }

  lzp_metrics restored_metrics{};
  check(lzp_evaluate(original.get(), restored.get(), c1, c2, &restored_metrics), "evaluate restored");
  std::optional<lzp_metrics> noisy_metrics;
  if (noisy) {
    lzp_metrics m{};
    check(lzp_evaluate(original.get(), noisy.get(), c1, c2, &m), "evaluate noisy");
    noisy_metrics = m;
  }

  // Columns: image id, N, sigma, levels, algo, SSIM, PSNR.
  const std::string image_id = c.string("image_id", fs::path(original_path).stem().string());
  const uint32_t w = lzp_image_width(original.get());
  const uint32_t h = lzp_image_height(original.get());
  const std::string n = w == h ? std::to_string(w) : std::to_string(w) + "x" + std::to_string(h);
  std::string sigma = "-";
  json sigma_value = nullptr;
  std::string algo = c.string("algo", "");
  if (restored_sidecar && restored_sidecar->contains("provenance")) {
    const auto& prov = (*restored_sidecar)["provenance"];
    if (prov.contains("sigma")) {
      sigma_value = prov["sigma"];
      std::ostringstream s;
      s << std::fixed << std::setprecision(2) << prov["sigma"].get<double>();
      sigma = s.str();
    }
    if (algo.empty() && prov.contains("method")) algo = prov["method"] == "pca" ? "PCA" : "GS";
  }
  if (algo.empty()) algo = "-";

  auto row = [&](const std::string& label, const lzp_metrics& m) {
    std::cout << std::left << std::setw(24) << image_id << std::setw(8) << n << std::setw(8) << sigma << std::setw(6)
              << lzp_image_levels(original.get()) << std::setw(8) << label << std::setw(10) << std::fixed
              << std::setprecision(4) << m.ssim << format_psnr(m) << "\n";
  };
  std::cout << std::left << std::setw(24) << "image id" << std::setw(8) << "N" << std::setw(8) << "sigma"
            << std::setw(6) << "l" << std::setw(8) << "algo" << std::setw(10) << "SSIM" << "PSNR" << "\n";
  if (noisy_metrics) row("noisy", *noisy_metrics);
  row(algo, restored_metrics);

  const std::string json_path = c.string("json", "");
  if (!json_path.empty()) {
    json report = {{"image_id", image_id},
                   {"width", w},
                   {"height", h},
                   {"levels", lzp_image_levels(original.get())},
                   {"sigma", sigma_value},
                   {"algo", algo},
                   {"c1", c1},
                   {"c2", c2},
                   {"restored", metrics_json(restored_metrics)}};
    if (noisy_metrics) report["noisy"] = metrics_json(*noisy_metrics);
    write_text(json_path, report.dump(2) + "\n");
  }
  return 0;
}

struct BenchFlags {
  std::optional<uint32_t> width, height, size, levels, steps;
  std::optional<std::vector<uint32_t>> threads;
  std::optional<uint64_t> seed;
  std::optional<std::string> output;
};

int cmd_bench(const json& merged) {
  const Config c(merged, {"width", "height", "size", "levels", "steps", "threads", "seed", "output"});
  uint32_t width = 512, height = 512;
  if (c.has("size")) width = height = static_cast<uint32_t>(c.unsigned_int("size", 0));
  width = static_cast<uint32_t>(c.unsigned_int("width", width));
  height = static_cast<uint32_t>(c.unsigned_int("height", height));
  const auto levels = static_cast<uint32_t>(c.unsigned_int("levels", 5, 65536));
  const auto steps = static_cast<uint32_t>(c.unsigned_int("steps", 10));
  const uint64_t seed = c.unsigned_int("seed", 1, UINT64_MAX);
  if (width == 0 || height == 0) config_error("image size must be positive");
  if (levels < 2) config_error("'levels' must be at least 2");
  if (steps == 0) config_error("'steps' must be positive");

  const unsigned hardware = std::max(1U, std::thread::hardware_concurrency());
  std::vector<uint32_t> thread_counts;
  if (c.has("threads")) {
    const json& t = c.raw("threads");
    if (!t.is_array() || t.empty()) config_error("'threads' must be a nonempty array of positive integers");
    for (const auto& v : t) {
      if (!v.is_number_unsigned() || v.get<uint32_t>() == 0) config_error("'threads' entries must be positive integers");
      thread_counts.push_back(v.get<uint32_t>());
    }
  } else {
    for (uint32_t k = 1; k <= std::max(4U, hardware); k *= 2) thread_counts.push_back(k);
  }

  // A uniformly random field serves as both start and observation.
  lzp_mrf_options gen;
  lzp_mrf_options_default(&gen);
  gen.width = width;
  gen.height = height;
  gen.levels = levels;
  gen.schedule.total_steps = 0;
  gen.seed = seed;
  lzp_image* raw = nullptr;
  check(lzp_generate_mrf(&gen, &raw), "bench image");
  const ImagePtr image(raw);

  json report = {{"width", width},   {"height", height}, {"levels", levels},
                 {"steps", steps},   {"seed", seed},     {"hardware_concurrency", hardware}};
  lzp_bench_result gibbs{};
  check(lzp_bench_kernel(image.get(), LZP_METHOD_GIBBS, 1, steps, seed, &gibbs), "bench gibbs");
  report["gibbs"] = {{"threads", 1},
                     {"seconds", gibbs.seconds},
                     {"site_updates", gibbs.site_updates},
                     {"site_updates_per_step", gibbs.site_updates / steps},
                     {"updates_per_second", gibbs.site_updates / std::max(gibbs.seconds, 1e-12)}};
  json pca = json::array();
  double baseline = 0.0;
  for (uint32_t threads : thread_counts) {
    lzp_bench_result r{};
    check(lzp_bench_kernel(image.get(), LZP_METHOD_PCA, threads, steps, seed, &r), "bench pca");
    if (baseline == 0.0) baseline = r.seconds;
    pca.push_back({{"threads", threads},
                   {"seconds", r.seconds},
                   {"site_updates", r.site_updates},
                   {"site_updates_per_step", r.site_updates / steps},
                   {"updates_per_second", r.site_updates / std::max(r.seconds, 1e-12)},
                   {"speedup", baseline / std::max(r.seconds, 1e-12)}});
  }
  report["pca"] = pca;

  const std::string output = c.string("output", "");
  if (output.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_text(output, report.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian denoising of gray-level images with Gibbs sampling and lazy PCA"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lzp_version());

  std::string config_path;
  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file; flags override its values");
  };

  Overrides gen_o, deg_o, den_o, eval_o, bench_o;

  GenerateFlags gf;
  auto* gen = app.add_subcommand("generate", "Synthesize a Markov random field test image");
  add_config(gen);
  gen_o.add(gen, "--width", "width", gf.width, "image width");
  gen_o.add(gen, "--height", "height", gf.height, "image height");
  gen_o.add(gen, "--size", "size", gf.size, "square image side");
  gen_o.add(gen, "--levels", "levels", gf.levels, "number of gray levels");
  gen_o.add(gen, "--coupling", "coupling", gf.coupling, "prior coupling J");
  gen_o.add(gen, "--beta0", "beta0", gf.beta0, "initial inverse temperature");
  gen_o.add(gen, "--beta-increment", "beta_increment", gf.beta_increment, "beta increase per period");
  gen_o.add(gen, "--beta-period", "beta_period", gf.beta_period, "sweeps per beta increase");
  gen_o.add(gen, "--steps", "steps", gf.steps, "number of sweeps");
  gen_o.add(gen, "--seed", "seed", gf.seed, "random seed");
  gen_o.add(gen, "-o,--output", "output", gf.output, "output PGM path");
  gen_o.add(gen, "--view", "view", gf.view, "optional 8-bit PGM for viewing");

  DegradeFlags dgf;
  auto* deg = app.add_subcommand("degrade", "Add Gaussian noise and requantize");
  add_config(deg);
  deg_o.add(deg, "-i,--input", "input", dgf.input, "input PGM");
  deg_o.add(deg, "-o,--output", "output", dgf.output, "output PGM");
  deg_o.add(deg, "--sigma", "sigma", dgf.sigma, "noise standard deviation (luminance units)");
  deg_o.add(deg, "--seed", "seed", dgf.seed, "random seed");
  deg_o.add(deg, "--threads", "threads", dgf.threads, "worker threads (0 = all)");
  deg_o.add(deg, "--view", "view", dgf.view, "optional 8-bit PGM for viewing");

  DenoiseFlags df;
  auto* den = app.add_subcommand("denoise", "Annealed MAP retrieval with Gibbs or lazy PCA");
  add_config(den);
  den_o.add(den, "-i,--input", "input", df.input, "noisy PGM");
  den_o.add(den, "-o,--output", "output", df.output, "restored PGM");
  den_o.add(den, "--method", "method", df.method, "gibbs or pca");
  den_o.add(den, "--steps", "steps", df.steps, "number of steps (sweeps for gibbs)");
  den_o.add(den, "--beta0", "beta0", df.beta0, "initial inverse temperature");
  den_o.add(den, "--beta-increment", "beta_increment", df.beta_increment, "beta increase per period");
  den_o.add(den, "--beta-period", "beta_period", df.beta_period, "steps per beta increase");
  den_o.add(den, "--coupling", "coupling", df.coupling, "prior coupling J");
  den_o.add(den, "--sigma", "sigma", df.sigma, "noise sigma (defaults to the input sidecar's)");
  den_o.add(den, "--q", "q", df.q, "PCA inertia");
  den_o.add(den, "--p", "p", df.p, "PCA inertial norm exponent (only 0)");
  den_o.add(den, "--kernel", "kernel", df.kernel, "PCA kernel: consistent or full");
  den_o.add(den, "--seed", "seed", df.seed, "random seed");
  den_o.add(den, "--threads", "threads", df.threads, "worker threads for pca (0 = all)");
  den_o.add(den, "--trace", "trace", df.trace, "per-step trace CSV");
  den_o.add(den, "--checkpoint-every", "checkpoint_every", df.checkpoint_every, "dump a PGM every k steps");
  den_o.add(den, "--checkpoint-dir", "checkpoint_dir", df.checkpoint_dir, "checkpoint directory");
  den_o.add(den, "--view", "view", df.view, "optional 8-bit PGM for viewing");

  EvaluateFlags ef;
  auto* ev = app.add_subcommand("evaluate", "MSE, PSNR and SSIM against the original");
  add_config(ev);
  eval_o.add(ev, "--original", "original", ef.original, "ground-truth PGM");
  eval_o.add(ev, "--restored", "restored", ef.restored, "restored PGM");
  eval_o.add(ev, "--noisy", "noisy", ef.noisy, "noisy PGM (baseline row)");
  eval_o.add(ev, "--image-id", "image_id", ef.image_id, "image id column");
  eval_o.add(ev, "--algo", "algo", ef.algo, "algo column");
  eval_o.add(ev, "--c1", "c1", ef.c1, "SSIM constant c1");
  eval_o.add(ev, "--c2", "c2", ef.c2, "SSIM constant c2");
  eval_o.add(ev, "--json", "json", ef.json_path, "write metrics JSON here");
  ev->add_flag("--force", ef.force, "report even if the lineage does not match");
  eval_o.entries.emplace_back("force", [&ef]() -> json { return ef.force ? json(*ef.force) : json(); });

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Time pca steps across thread counts");
  add_config(bench);
  bench_o.add(bench, "--width", "width", bf.width, "image width");
  bench_o.add(bench, "--height", "height", bf.height, "image height");
  bench_o.add(bench, "--size", "size", bf.size, "square image side");
  bench_o.add(bench, "--levels", "levels", bf.levels, "gray levels");
  bench_o.add(bench, "--steps", "steps", bf.steps, "steps per measurement");
  bench_o.add(bench, "--threads", "threads", bf.threads, "thread counts to measure");
  bench_o.add(bench, "--seed", "seed", bf.seed, "random seed");
  bench_o.add(bench, "-o,--output", "output", bf.output, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    json merged = load_config_file(config_path);
    if (*gen) {
      gen_o.apply(merged);
      return cmd_generate(merged);
    }
    if (*deg) {
      deg_o.apply(merged);
      return cmd_degrade(merged);
    }
    if (*den) {
      den_o.apply(merged);
      return cmd_denoise(merged);
    }
    if (*ev) {
      eval_o.apply(merged);
      return cmd_evaluate(merged);
    }
    bench_o.apply(merged);
    return cmd_bench(merged);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
