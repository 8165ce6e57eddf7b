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

#include "lazypca/core.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lazypca {

std::size_t to_linear(Site site, std::size_t height) {
  if (site.row >= height) fail("row " + std::to_string(site.row) + " out of range for height " + std::to_string(height));
  return site.col * height + site.row;
}

Site from_linear(std::size_t index, std::size_t height) {
  if (height == 0) fail("height must be positive");
  return {index % height, index / height};
}

LevelImage::LevelImage(Dims dims, unsigned levels) : LevelImage(dims, levels, std::vector<Level>(dims.sites(), 0)) {}

LevelImage::LevelImage(Dims dims, unsigned levels, std::vector<Level> data)
    : dims_(dims), levels_(levels), data_(std::move(data)) {
  if (dims.width == 0 || dims.height == 0) fail("image dimensions must be positive");
  if (dims.sites() > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorKind::TooLarge, "image has too many pixels");
  if (levels < 1 || levels > 65536) fail("levels must be in [1, 65536], got " + std::to_string(levels));
  if (data_.size() != dims.sites())
    fail("pixel buffer has " + std::to_string(data_.size()) + " entries, expected " + std::to_string(dims.sites()));
  for (Level v : data_)
    if (v >= levels) fail("pixel level " + std::to_string(v) + " not below levels=" + std::to_string(levels));
}

void LevelImage::set(std::size_t i, Level v) {
  if (v >= levels_) fail("pixel level out of range");
  data_.at(i) = v;
}

std::uint64_t LevelImage::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t value, int bytes) {
    for (int b = 0; b < bytes; ++b) {
      h ^= (value >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(dims_.width, 8);
  mix(dims_.height, 8);
  mix(levels_, 4);
  for (Level v : data_) mix(v, 2);
  return h;
}

void require_same_shape(const LevelImage& a, const LevelImage& b, const char* what) {
  if (a.dims() != b.dims())
    fail(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
         " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()) + ")");
  if (a.levels() != b.levels())
    fail(std::string(what) + ": level count mismatch (" + std::to_string(a.levels()) + " vs " +
         std::to_string(b.levels()) + ")");
}

std::vector<Site> neighbors(Dims dims, Site site) {
  if (!dims.contains(site))
    fail("site (" + std::to_string(site.row) + "," + std::to_string(site.col) + ") outside " +
         std::to_string(dims.width) + "x" + std::to_string(dims.height) + " image");
  std::vector<Site> out;
  out.reserve(8);
  const std::size_t r0 = site.row == 0 ? 0 : site.row - 1;
  const std::size_t c0 = site.col == 0 ? 0 : site.col - 1;
  const std::size_t r1 = std::min(site.row + 1, dims.height - 1);
  const std::size_t c1 = std::min(site.col + 1, dims.width - 1);
  for (std::size_t r = r0; r <= r1; ++r)
    for (std::size_t c = c0; c <= c1; ++c)
      if (r != site.row || c != site.col) out.push_back({r, c});
  return out;
}

NeighborTable::NeighborTable(Dims dims) : dims_(dims) {
  const std::size_t n = dims.sites();
  offsets_.reserve(n + 1);
  flat_.reserve(8 * n);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (Site s : neighbors(dims, from_linear(i, dims.height)))
      flat_.push_back(static_cast<std::uint32_t>(to_linear(s, dims.height)));
    offsets_.push_back(static_cast<std::uint32_t>(flat_.size()));
  }
}

}  // namespace lazypca
