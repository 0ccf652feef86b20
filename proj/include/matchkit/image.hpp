// Copyright (c) 2026 The matchkit authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "matchkit/core.hpp"

namespace matchkit::imageio {

/// Row-major 8-bit grayscale raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  bool operator==(const Image& o) const {
    return width == o.width && height == o.height && data == o.data;
  }
};

namespace detail {

// Reads the next header token, skipping whitespace and '#' comments.
inline std::string next_pgm_token(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < bytes.size()) {
    const char c = static_cast<char>(bytes[pos]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') break;
    tok.push_back(c);
    ++pos;
  }
  return tok;
}

inline long parse_pgm_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  const std::string tok = next_pgm_token(bytes, pos);
  if (tok.empty()) throw MalformedHeader("pgm: truncated header");
  long value = 0;
  for (const char c : tok) {
    if (c < '0' || c > '9') throw MalformedHeader("pgm: non-numeric header field '" + tok + "'");
    value = value * 10 + (c - '0');
    if (value > 1000000000L) throw MalformedHeader("pgm: header field out of range");
  }
  return value;
}

}  // namespace detail

/// Parses a binary (P5) PGM byte stream. maxval above 255 is rejected.
inline Image read_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  const std::string magic = detail::next_pgm_token(bytes, pos);
  if (magic != "P5") throw MalformedHeader("pgm: expected magic P5");
  const long w = detail::parse_pgm_int(bytes, pos);
  const long h = detail::parse_pgm_int(bytes, pos);
  const long maxval = detail::parse_pgm_int(bytes, pos);
  if (w <= 0 || h <= 0) throw MalformedHeader("pgm: nonpositive dimensions");
  if (maxval < 1 || maxval > 255) throw UnsupportedMaxval("pgm: maxval must be in [1, 255]");
  // Exactly one whitespace byte separates the header from the raster.
  if (pos >= bytes.size()) throw TruncatedData("pgm: missing raster");
  const char sep = static_cast<char>(bytes[pos]);
  if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
    throw MalformedHeader("pgm: missing separator after maxval");
  ++pos;
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos < need) throw TruncatedData("pgm: raster shorter than header promises");
  Image img(static_cast<int>(w), static_cast<int>(h));
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
            bytes.begin() + static_cast<std::ptrdiff_t>(pos + need), img.data.begin());
  return img;
}

inline std::vector<std::uint8_t> write_pgm(const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

inline Image read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageLoadError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return read_pgm(bytes);
}

inline void write_pgm_file(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageLoadError("cannot open " + path + " for writing");
  const auto bytes = write_pgm(img);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

/// Warps src by homography h: output pixel (x, y) is sampled from src at
/// h^-1 (x, y, 1) with bilinear interpolation, quantized round-half-up.
/// Samples outside the source raster produce `fill`.
inline Image warp_image(const Image& src, const Eigen::Matrix3d& h, std::uint8_t fill = 0) {
  if (std::abs(h.determinant()) < 1e-12) throw SingularHomography("warp: homography not invertible");
  const Eigen::Matrix3d inv = h.inverse();
  Image out(src.width, src.height, fill);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      const Eigen::Vector3d s = inv * Eigen::Vector3d(x, y, 1.0);
      if (std::abs(s.z()) < 1e-12) continue;
      const double sx = s.x() / s.z();
      const double sy = s.y() / s.z();
      if (sx < 0.0 || sy < 0.0 || sx > src.width - 1.0 || sy > src.height - 1.0) continue;
      const int x0 = static_cast<int>(sx);
      const int y0 = static_cast<int>(sy);
      const int x1 = x0 + 1 < src.width ? x0 + 1 : x0;
      const int y1 = y0 + 1 < src.height ? y0 + 1 : y0;
      const double fx = sx - x0;
      const double fy = sy - y0;
      const double v = (1.0 - fy) * ((1.0 - fx) * src.at(x0, y0) + fx * src.at(x1, y0)) +
                       fy * ((1.0 - fx) * src.at(x0, y1) + fx * src.at(x1, y1));
      double q = std::floor(v + 0.5);
      if (q < 0.0) q = 0.0;
      if (q > 255.0) q = 255.0;
      out.at(x, y) = static_cast<std::uint8_t>(q);
    }
  }
  return out;
}

}  // namespace matchkit::imageio
