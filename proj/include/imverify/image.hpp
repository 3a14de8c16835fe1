/* Copyright 2026 The imverify Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef IMVERIFY_IMAGE_HPP_
#define IMVERIFY_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace imverify {

// Raised when an operation receives arguments outside its domain (bad kernel
// size, mismatched dimensions, wrong parameter type, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Dims {
  int width = 0;
  int height = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
};

// Integer pixel coordinate; `i` is the column, `j` the row.
struct Coord {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

inline bool in_bounds(Dims dims, Coord c) {
  return c.i >= 0 && c.j >= 0 && c.i < dims.width && c.j < dims.height;
}

// 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  static Image filled(int width, int height, int channels, std::uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  Dims dims() const { return {width_, height_}; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int i, int j, int ch = 0) const {
    return pixels_[index(i, j, ch)];
  }
  std::uint8_t& at(int i, int j, int ch = 0) {
    return pixels_[index(i, j, ch)];
  }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> mutable_pixels() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int i, int j, int ch) const {
    return (static_cast<std::size_t>(j) * width_ + i) * channels_ + ch;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Rounds each component to the nearest integer; an exact .5 fraction rounds
// toward +infinity. Results may be out of bounds.
Coord round_coord(double x, double y);

// Same convention as round_coord, for a single value.
long long round_half_up(double v);

// Rounds half-up and clamps to [0, 255].
std::uint8_t clamp_pixel(double v);

// SHA-256 over (width, height, channels, pixels).
using Digest = std::array<std::uint8_t, 32>;

Digest image_digest(const Image& img);
std::string to_hex(const Digest& d);
Digest digest_from_hex(const std::string& hex);

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h = 0;
    for (int k = 0; k < 8; ++k) h = (h << 8) | d[k];
    return h;
  }
};

// PNG import/export. Only 8-bit grayscale and 8-bit RGB are supported; other
// PNG color types are converted on read (alpha is dropped).
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);

}  // namespace imverify

#endif  // IMVERIFY_IMAGE_HPP_
