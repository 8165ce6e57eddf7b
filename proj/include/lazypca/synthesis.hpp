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

#pragma once

#include <cstdint>

#include "lazypca/core.hpp"
#include "lazypca/model.hpp"
#include "lazypca/worker_pool.hpp"

namespace lazypca {

struct MrfGenSpec {
  Dims dims{64, 64};
  unsigned levels = 5;
  double coupling = 1.0 / 3.0;
  AnnealSchedule schedule{0.4, 0.1, 50, 400};
  std::uint64_t seed = 1;
  void validate() const;
};

/// Uniform random start followed by prior-only Gibbs sweeps under the
/// generation schedule. A zero-step schedule returns the i.i.d. start.
LevelImage generate_mrf(const MrfGenSpec& spec);

/// Nearest level to a luminance, clamped to [0, 1]; ties go to the lower index.
Level quantize_luminance(double luminance, unsigned levels) noexcept;

/// Adds Normal(0, sigma^2) to each luminance, clamps to [0, 1] and rounds
/// to the nearest level. Per-site draws make the result thread-count free.
LevelImage degrade(const LevelImage& x, const NoiseModel& noise, std::uint64_t seed, WorkerPool& pool);
LevelImage degrade(const LevelImage& x, const NoiseModel& noise, std::uint64_t seed);

}  // namespace lazypca
