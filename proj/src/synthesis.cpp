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

#include "lazypca/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "lazypca/rng.hpp"
#include "lazypca/samplers.hpp"

namespace lazypca {

void MrfGenSpec::validate() const {
  if (dims.width == 0 || dims.height == 0) fail("image size must be positive");
  if (levels < 2) fail("levels must be at least 2");
  PriorParams{coupling}.validate();
  schedule.validate();
}

LevelImage generate_mrf(const MrfGenSpec& spec) {
  spec.validate();
  LevelImage x(spec.dims, spec.levels);
  auto data = x.mutable_data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double u = RngStream(spec.seed, Stage::MrfInit, 0, static_cast<std::uint32_t>(i)).uniform();
    data[i] = static_cast<Level>(std::min<unsigned>(static_cast<unsigned>(u * spec.levels), spec.levels - 1));
  }
  const NeighborTable table(spec.dims);
  const SiteScorer prior_only(table, spec.levels, nullptr, PriorParams{spec.coupling}, NoiseModel{});
  for (std::uint32_t t = 0; t < spec.schedule.total_steps; ++t)
    gibbs_sweep_in_place(x, prior_only, beta_at(spec.schedule, t), spec.seed, Stage::MrfSweep, t);
  return x;
}

Level quantize_luminance(double luminance, unsigned levels) noexcept {
  if (levels < 2) return 0;
  const double clamped = std::clamp(luminance, 0.0, 1.0);
  const double scaled = clamped * static_cast<double>(levels - 1);
  const double lower = std::floor(scaled);
  // Compare distances on the luminance scale so ties resolve downward exactly.
  const double lo_lum = LevelImage::level_luminance(static_cast<unsigned>(lower), levels);
  const auto lo = static_cast<unsigned>(lower);
  if (lo + 1 >= levels) return static_cast<Level>(levels - 1);
  const double hi_lum = LevelImage::level_luminance(lo + 1, levels);
  return static_cast<Level>(std::abs(clamped - lo_lum) <= std::abs(hi_lum - clamped) ? lo : lo + 1);
}

LevelImage degrade(const LevelImage& x, const NoiseModel& noise, std::uint64_t seed, WorkerPool& pool) {
  noise.validate();
  LevelImage out = x;
  auto data = out.mutable_data();
  const unsigned levels = x.levels();
  pool.parallel_for(data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double eps = gaussian_draw(RngStream(seed, Stage::Degrade, 0, static_cast<std::uint32_t>(i)), noise.sigma);
      data[i] = quantize_luminance(x.luminance(i) + eps, levels);
    }
  });
  return out;
}

LevelImage degrade(const LevelImage& x, const NoiseModel& noise, std::uint64_t seed) {
  WorkerPool pool(1);
  return degrade(x, noise, seed, pool);
}

}  // namespace lazypca
