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

#include <array>
#include <cstdint>

namespace lazypca {

/// Philox4x32-10 (Salmon et al., SC'11). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Which part of the pipeline a draw belongs to. Part of the counter, so
/// streams of different stages never overlap.
enum class Stage : std::uint32_t {
  MrfInit = 1,
  MrfSweep = 2,
  Degrade = 3,
  Gibbs = 4,
  Pca = 5,
  Test = 0xffff,
};

/// Stateless random stream keyed by (seed, stage, step, site). Every draw is
/// a pure function of those four values, so results do not depend on the
/// thread count or on the order sites are visited.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, Stage stage, std::uint32_t step, std::uint32_t site) noexcept
      : seed_(seed), stage_(stage), step_(step), site_(site) {}

  /// Raw 128-bit block for this context.
  std::array<std::uint32_t, 4> block() const noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() const noexcept;
  /// Two independent uniforms in [0, 1) from the same block.
  std::array<double, 2> uniform_pair() const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  Stage stage() const noexcept { return stage_; }
  std::uint32_t step() const noexcept { return step_; }
  std::uint32_t site() const noexcept { return site_; }

 private:
  std::uint64_t seed_;
  Stage stage_;
  std::uint32_t step_;
  std::uint32_t site_;
};

inline double uniform_draw(const RngStream& stream) noexcept { return stream.uniform(); }

/// Normal(0, sigma^2) via Box-Muller on the stream's uniform pair (cosine branch).
double gaussian_draw(const RngStream& stream, double sigma);

}  // namespace lazypca
