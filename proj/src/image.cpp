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
#include "imverify/image.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <memory>

namespace imverify {

Image::Image(int width, int height, int channels,
             std::vector<std::uint8_t> pixels)
    : width_(width),
      height_(height),
      channels_(channels),
      pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw DomainError("image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw DomainError("image must have 1 or 3 channels");
  }
  if (pixels_.size() !=
      static_cast<std::size_t>(width) * height * channels) {
    throw DomainError("pixel buffer size does not match W x H x channels");
  }
}

Image Image::filled(int width, int height, int channels, std::uint8_t value) {
  return Image(width, height, channels,
               std::vector<std::uint8_t>(
                   static_cast<std::size_t>(width) * height * channels, value));
}

long long round_half_up(double v) {
  // floor(v + 0.5) misrounds values just below .5 once the sum is rounded.
  const double base = std::floor(v);
  return static_cast<long long>(base) + ((v - base) >= 0.5 ? 1 : 0);
}

Coord round_coord(double x, double y) {
  return {static_cast<int>(round_half_up(x)),
          static_cast<int>(round_half_up(y))};
}

std::uint8_t clamp_pixel(double v) {
  if (!(v < 255.0)) return 255;
  if (v < 0.0) return 0;
  const long long r = round_half_up(v);
  return static_cast<std::uint8_t>(r > 255 ? 255 : (r < 0 ? 0 : r));
}

Digest image_digest(const Image& img) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::uint8_t header[12];
  const std::uint32_t fields[3] = {static_cast<std::uint32_t>(img.width()),
                                   static_cast<std::uint32_t>(img.height()),
                                   static_cast<std::uint32_t>(img.channels())};
  for (int f = 0; f < 3; ++f) {
    for (int b = 0; b < 4; ++b) header[f * 4 + b] = (fields[f] >> (8 * b)) & 0xff;
  }
  EVP_DigestUpdate(ctx.get(), header, sizeof(header));
  const auto px = img.pixels();
  EVP_DigestUpdate(ctx.get(), px.data(), px.size());
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), out.data(), &len);
  return out;
}

std::string to_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : d) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

Digest digest_from_hex(const std::string& hex) {
  if (hex.size() != 64) throw DomainError("digest hex must be 64 characters");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw DomainError("invalid hex digit in digest");
  };
  Digest d{};
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = static_cast<std::uint8_t>(nibble(hex[2 * k]) << 4 |
                                     nibble(hex[2 * k + 1]));
  }
  return d;
}

}  // namespace imverify
