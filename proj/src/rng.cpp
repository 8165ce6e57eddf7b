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

#include "lazypca/rng.hpp"

#include <cmath>
#include <numbers>

#include "lazypca/core.hpp"

namespace lazypca {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::array<std::uint32_t, 4> RngStream::block() const noexcept {
  // counter = (site, step, stage, 0), key = seed
  return philox4x32({site_, step_, static_cast<std::uint32_t>(stage_), 0},
                    {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

double RngStream::uniform() const noexcept {
  const auto b = block();
  return to_unit(b[0], b[1]);
}

std::array<double, 2> RngStream::uniform_pair() const noexcept {
  const auto b = block();
  return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
}

double gaussian_draw(const RngStream& stream, double sigma) {
  if (!(sigma > 0.0)) fail("gaussian_draw: sigma must be positive");
  const auto [u1, u2] = stream.uniform_pair();
  // 1 - u1 lies in (0, 1], keeping the log finite.
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  return sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lazypca
