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

#include <limits>

#include "lazypca/core.hpp"

namespace lazypca {

/// Stabilizing constants for global SSIM on luminances in [0, 1].
struct SsimConstants {
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
};

struct MetricsReport {
  double mse = 0.0;
  double psnr = 0.0;  // +infinity when mse == 0
  double ssim = 1.0;
  bool psnr_is_infinite() const noexcept { return psnr == std::numeric_limits<double>::infinity(); }
};

/// Mean squared luminance difference.
double mse(const LevelImage& x, const LevelImage& y);

/// 20 log10(max lum(original) / sqrt(mse)); +infinity when the images agree.
/// Throws if the original is all black.
double psnr(const LevelImage& original, const LevelImage& other);

/// Single-window SSIM from whole-image population statistics.
double ssim(const LevelImage& x, const LevelImage& y, const SsimConstants& constants = {});

MetricsReport evaluate(const LevelImage& original, const LevelImage& other,
                       const SsimConstants& constants = {});

}  // namespace lazypca
