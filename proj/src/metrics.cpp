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

#include "lazypca/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lazypca {

double mse(const LevelImage& x, const LevelImage& y) {
  require_same_shape(x, y, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.luminance(i) - y.luminance(i);
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double psnr(const LevelImage& original, const LevelImage& other) {
  const double err = mse(original, other);
  const Level peak_level = *std::max_element(original.data().begin(), original.data().end());
  const double peak = LevelImage::level_luminance(peak_level, original.levels());
  if (!(peak > 0.0)) fail("psnr: original image is all black, peak value is zero");
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / std::sqrt(err));
}

double ssim(const LevelImage& x, const LevelImage& y, const SsimConstants& k) {
  require_same_shape(x, y, "ssim");
  const auto n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x.luminance(i);
    mean_y += y.luminance(i);
  }
  mean_x /= n;
  mean_y /= n;
  double var_x = 0.0, var_y = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x.luminance(i) - mean_x;
    const double dy = y.luminance(i) - mean_y;
    var_x += dx * dx;
    var_y += dy * dy;
    cov += dx * dy;
  }
  var_x /= n;
  var_y /= n;
  cov /= n;
  return ((2.0 * mean_x * mean_y + k.c1) * (2.0 * cov + k.c2)) /
         ((mean_x * mean_x + mean_y * mean_y + k.c1) * (var_x + var_y + k.c2));
}

MetricsReport evaluate(const LevelImage& original, const LevelImage& other, const SsimConstants& constants) {
  return {mse(original, other), psnr(original, other), ssim(original, other, constants)};
}

}  // namespace lazypca
