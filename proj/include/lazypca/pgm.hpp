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
#include <filesystem>
#include <iosfwd>

#include "lazypca/core.hpp"

namespace lazypca {

/// Binary PGM (P5) with maxval = levels - 1. Samples are one byte when
/// maxval < 256, otherwise two bytes big-endian.
void write_pgm(std::ostream& out, const LevelImage& image);
void write_pgm(const std::filesystem::path& path, const LevelImage& image);

/// Reads a P5 file; levels = maxval + 1.
LevelImage read_pgm(std::istream& in);
LevelImage read_pgm(const std::filesystem::path& path);

/// 8-bit viewing copy, each level scaled by 255 / (levels - 1) and rounded.
void write_pgm8(const std::filesystem::path& path, const LevelImage& image);

}  // namespace lazypca
