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

#include "lazypca/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace lazypca {

namespace {

[[noreturn]] void io_fail(const std::string& what) { throw Error(ErrorKind::Io, what); }

// Skips whitespace and '#' comments, then reads one unsigned decimal token.
unsigned long read_header_value(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == std::char_traits<char>::eof()) io_fail("PGM: truncated header");
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else {
      break;
    }
  }
  unsigned long value = 0;
  bool any = false;
  while (std::isdigit(in.peek())) {
    value = value * 10 + static_cast<unsigned long>(in.get() - '0');
    any = true;
    if (value > 1UL << 31) io_fail("PGM: header value too large");
  }
  if (!any) io_fail("PGM: malformed header");
  return value;
}

}  // namespace

void write_pgm(std::ostream& out, const LevelImage& image) {
  if (image.levels() < 2) fail("PGM needs at least two levels (maxval >= 1)");
  const unsigned maxval = image.levels() - 1;
  out << "P5\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
  const bool wide = maxval > 255;
  std::string row;
  row.reserve(image.width() * (wide ? 2 : 1));
  for (std::size_t r = 0; r < image.height(); ++r) {
    row.clear();
    for (std::size_t c = 0; c < image.width(); ++c) {
      const Level v = image.at({r, c});
      if (wide) row.push_back(static_cast<char>(v >> 8));
      row.push_back(static_cast<char>(v & 0xff));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) io_fail("PGM: write failed");
}

void write_pgm(const std::filesystem::path& path, const LevelImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot open " + path.string() + " for writing");
  write_pgm(out, image);
  out.close();
  if (!out) io_fail("error writing " + path.string());
}

LevelImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') io_fail("PGM: expected binary P5 magic");
  const unsigned long width = read_header_value(in);
  const unsigned long height = read_header_value(in);
  const unsigned long maxval = read_header_value(in);
  if (width == 0 || height == 0) io_fail("PGM: zero dimension");
  if (maxval == 0 || maxval > 65535) io_fail("PGM: maxval out of range");
  if (!std::isspace(in.get())) io_fail("PGM: missing whitespace after maxval");

  const bool wide = maxval > 255;
  const Dims dims{width, height};
  std::vector<Level> data(dims.sites());
  std::string row(width * (wide ? 2 : 1), '\0');
  for (std::size_t r = 0; r < height; ++r) {
    in.read(row.data(), static_cast<std::streamsize>(row.size()));
    if (!in) io_fail("PGM: truncated pixel data");
    for (std::size_t c = 0; c < width; ++c) {
      unsigned v = static_cast<unsigned char>(row[wide ? 2 * c + 1 : c]);
      if (wide) v |= static_cast<unsigned>(static_cast<unsigned char>(row[2 * c])) << 8;
      if (v > maxval) io_fail("PGM: sample exceeds maxval");
      data[to_linear({r, c}, height)] = static_cast<Level>(v);
    }
  }
  return LevelImage(dims, static_cast<unsigned>(maxval + 1), std::move(data));
}

LevelImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm8(const std::filesystem::path& path, const LevelImage& image) {
  std::vector<Level> scaled(image.size());
  const double factor = image.levels() < 2 ? 0.0 : 255.0 / static_cast<double>(image.levels() - 1);
  for (std::size_t i = 0; i < image.size(); ++i) scaled[i] = static_cast<Level>(std::lround(image[i] * factor));
  write_pgm(path, LevelImage(image.dims(), 256, std::move(scaled)));
}

}  // namespace lazypca
