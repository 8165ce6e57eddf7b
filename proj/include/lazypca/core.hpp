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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lazypca {

enum class ErrorKind { InvalidArgument, Io, TooLarge };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

/// Gray-level index. Luminance of level k is k / (levels - 1).
using Level = std::uint16_t;

struct Site {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
};

struct Dims {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t sites() const noexcept { return width * height; }
  bool contains(Site s) const noexcept { return s.row < height && s.col < width; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Column-major: i = col * height + row.
std::size_t to_linear(Site site, std::size_t height);
Site from_linear(std::size_t index, std::size_t height);

/// Quantized gray-level image stored in column-major order.
class LevelImage {
 public:
  LevelImage() = default;
  /// All pixels at level 0. Throws on zero dimensions or levels < 1.
  LevelImage(Dims dims, unsigned levels);
  LevelImage(Dims dims, unsigned levels, std::vector<Level> data);

  Dims dims() const noexcept { return dims_; }
  std::size_t width() const noexcept { return dims_.width; }
  std::size_t height() const noexcept { return dims_.height; }
  std::size_t size() const noexcept { return data_.size(); }
  unsigned levels() const noexcept { return levels_; }

  Level operator[](std::size_t i) const { return data_[i]; }
  Level at(Site s) const { return data_[to_linear(s, dims_.height)]; }
  void set(std::size_t i, Level v);

  std::span<const Level> data() const noexcept { return data_; }
  std::span<Level> mutable_data() noexcept { return data_; }

  double luminance(std::size_t i) const { return level_luminance(data_[i], levels_); }

  static double level_luminance(unsigned level, unsigned levels) {
    return levels < 2 ? 0.0 : static_cast<double>(level) / static_cast<double>(levels - 1);
  }

  /// FNV-1a 64 over dimensions, level count and pixel data.
  std::uint64_t content_hash() const;

  friend bool operator==(const LevelImage&, const LevelImage&) = default;

 private:
  Dims dims_;
  unsigned levels_ = 0;
  std::vector<Level> data_;
};

void require_same_shape(const LevelImage& a, const LevelImage& b, const char* what);

/// Moore-8 neighbors with free (truncated) boundaries, sorted by (row, col).
std::vector<Site> neighbors(Dims dims, Site site);

/// Precomputed linear-index adjacency for a lattice. Neighbor lists are
/// stored in one flat buffer; each interior site has 8 entries.
class NeighborTable {
 public:
  explicit NeighborTable(Dims dims);

  Dims dims() const noexcept { return dims_; }
  std::span<const std::uint32_t> of(std::size_t i) const {
    return {flat_.data() + offsets_[i], flat_.data() + offsets_[i + 1]};
  }
  /// Number of ordered neighbor pairs (each unordered pair counted twice).
  std::size_t ordered_pairs() const noexcept { return flat_.size(); }

 private:
  Dims dims_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> flat_;
};

}  // namespace lazypca
