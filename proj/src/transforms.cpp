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
#include "imverify/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace imverify {

namespace {

struct KindName {
  TransformKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 15> kKindNames{{
    {TransformKind::kAvgSmooth, "avg_smooth"},
    {TransformKind::kMedianSmooth, "median_smooth"},
    {TransformKind::kErosion, "erosion"},
    {TransformKind::kDilation, "dilation"},
    {TransformKind::kContrast, "contrast"},
    {TransformKind::kBrightness, "brightness"},
    {TransformKind::kOcclusion, "occlusion"},
    {TransformKind::kRotation, "rotation"},
    {TransformKind::kShear, "shear"},
    {TransformKind::kScale, "scale"},
    {TransformKind::kTranslation, "translation"},
    {TransformKind::kReflection, "reflection"},
    {TransformKind::kFog, "fog"},
    {TransformKind::kComposite, "composite"},
    {TransformKind::kPlugin, "plugin"},
}};

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

// Window offsets for a kernel of side c: [-(c/2), c - 1 - c/2].
int window_begin(int c) { return -(c / 2); }

int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

Image box_reduce(const Image& img, int c, TransformKind kind) {
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const int b = window_begin(c);
  Image out = img;
  if (kind == TransformKind::kAvgSmooth) {
    // Separable integer box sum; exact, then rounded half-up.
    std::vector<long long> rows(static_cast<std::size_t>(w) * h * ch);
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        for (int k = 0; k < ch; ++k) {
          long long s = 0;
          for (int d = 0; d < c; ++d) s += img.at(clamp_index(i + b + d, w), j, k);
          rows[(static_cast<std::size_t>(j) * w + i) * ch + k] = s;
        }
      }
    }
    const long long area = static_cast<long long>(c) * c;
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        for (int k = 0; k < ch; ++k) {
          long long s = 0;
          for (int d = 0; d < c; ++d) {
            s += rows[(static_cast<std::size_t>(clamp_index(j + b + d, h)) * w +
                       i) * ch + k];
          }
          out.at(i, j, k) = static_cast<std::uint8_t>((2 * s + area) / (2 * area));
        }
      }
    }
    return out;
  }
  if (kind == TransformKind::kErosion || kind == TransformKind::kDilation) {
    const bool take_min = kind == TransformKind::kErosion;
    Image rows = img;
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        for (int k = 0; k < ch; ++k) {
          std::uint8_t m = img.at(clamp_index(i + b, w), j, k);
          for (int d = 1; d < c; ++d) {
            const auto v = img.at(clamp_index(i + b + d, w), j, k);
            m = take_min ? std::min(m, v) : std::max(m, v);
          }
          rows.at(i, j, k) = m;
        }
      }
    }
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        for (int k = 0; k < ch; ++k) {
          std::uint8_t m = rows.at(i, clamp_index(j + b, h), k);
          for (int d = 1; d < c; ++d) {
            const auto v = rows.at(i, clamp_index(j + b + d, h), k);
            m = take_min ? std::min(m, v) : std::max(m, v);
          }
          out.at(i, j, k) = m;
        }
      }
    }
    return out;
  }
  // Median, odd c only.
  std::vector<std::uint8_t> window(static_cast<std::size_t>(c) * c);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      for (int k = 0; k < ch; ++k) {
        std::size_t n = 0;
        for (int dj = 0; dj < c; ++dj) {
          for (int di = 0; di < c; ++di) {
            window[n++] = img.at(clamp_index(i + b + di, w),
                                 clamp_index(j + b + dj, h), k);
          }
        }
        auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        out.at(i, j, k) = *mid;
      }
    }
  }
  return out;
}

std::array<int, 2> occlusion_origin(const TransformSpec& spec, Dims dims,
                                    const ParamValue& c) {
  if (!spec.mask) throw DomainError("occlusion requires a mask image");
  const auto& m = *spec.mask;
  if (m.width() > dims.width || m.height() > dims.height) {
    throw DomainError("occlusion mask larger than image");
  }
  const auto& p = c.as_pair();
  if (!is_integer(p[0]) || !is_integer(p[1])) {
    throw DomainError("occlusion placement must be integral");
  }
  const int x = static_cast<int>(p[0]);
  const int y = static_cast<int>(p[1]);
  if (x < 0 || y < 0 || x > dims.width - m.width() ||
      y > dims.height - m.height()) {
    throw DomainError("occlusion placement " + to_string(c) +
                      " outside the valid range");
  }
  return {x, y};
}

std::uint8_t mask_value(const Image& mask, int i, int j, int k) {
  return mask.at(i, j, mask.channels() == 1 ? 0 : k);
}

void check_mask_channels(const Image& mask, const Image& img) {
  if (mask.channels() != 1 && mask.channels() != img.channels()) {
    throw DomainError("mask channel count incompatible with image");
  }
}

// Forward destination of a source pixel for the affine geometric kinds.
// Precomputed trigonometry keeps rotation consistent across pixels.
class GeometricMap {
 public:
  GeometricMap(TransformKind kind, Dims dims, const ParamValue& c)
      : kind_(kind), dims_(dims) {
    switch (kind) {
      case TransformKind::kRotation: {
        const double rad = c.scalar() * std::numbers::pi / 180.0;
        cos_ = std::cos(rad);
        sin_ = std::sin(rad);
        cx_ = (dims.width - 1) / 2.0;
        cy_ = (dims.height - 1) / 2.0;
        break;
      }
      case TransformKind::kShear:
      case TransformKind::kScale:
      case TransformKind::kTranslation:
        a_ = c.as_pair()[0];
        b_ = c.as_pair()[1];
        break;
      case TransformKind::kReflection:
        reflection_ = c.reflection();
        break;
      default:
        throw DomainError("not an affine geometric transform");
    }
  }

  Coord operator()(int i, int j) const {
    switch (kind_) {
      case TransformKind::kRotation: {
        const double x = i - cx_;
        const double y = j - cy_;
        return round_coord(x * cos_ - y * sin_ + cx_, x * sin_ + y * cos_ + cy_);
      }
      case TransformKind::kShear:
        return {i + static_cast<int>(round_half_up(j * a_)),
                j + static_cast<int>(round_half_up(i * b_))};
      case TransformKind::kScale:
        return {static_cast<int>(round_half_up(i * a_)),
                static_cast<int>(round_half_up(j * b_))};
      case TransformKind::kTranslation:
        return {i + static_cast<int>(round_half_up(a_)),
                j + static_cast<int>(round_half_up(b_))};
      case TransformKind::kReflection: {
        const bool flip_x = reflection_ != Reflection::kVertical;
        const bool flip_y = reflection_ != Reflection::kHorizontal;
        return {flip_x ? dims_.width - 1 - i : i,
                flip_y ? dims_.height - 1 - j : j};
      }
      default:
        return {i, j};
    }
  }

 private:
  TransformKind kind_;
  Dims dims_;
  double cos_ = 1.0, sin_ = 0.0, cx_ = 0.0, cy_ = 0.0;
  double a_ = 0.0, b_ = 0.0;
  Reflection reflection_ = Reflection::kHorizontal;
};

void check_pair_finite(TransformKind kind, const ParamValue& c) {
  const auto& p = c.as_pair();
  if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
    throw DomainError(std::string(kind_name(kind)) +
                      " parameter must be finite");
  }
  // Keeps mapped coordinates representable as int.
  if (std::abs(p[0]) > 1e6 || std::abs(p[1]) > 1e6) {
    throw DomainError(std::string(kind_name(kind)) + " parameter too large");
  }
}

}  // namespace

std::string_view kind_name(TransformKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

TransformKind kind_from_name(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  if (name.size() > 3 && name.substr(0, 3) == "phi") {
    const std::string digits(name.substr(3));
    if (!digits.empty() &&
        std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const int idx = std::stoi(digits);
      if (idx >= 1 && idx <= 12) return kKindNames[idx - 1].kind;
    }
  }
  throw DomainError("unknown transform '" + std::string(name) + "'");
}

TransformFamily family(TransformKind kind) {
  switch (kind) {
    case TransformKind::kAvgSmooth:
    case TransformKind::kMedianSmooth:
    case TransformKind::kErosion:
    case TransformKind::kDilation:
      return TransformFamily::kConvolution;
    case TransformKind::kContrast:
    case TransformKind::kBrightness:
      return TransformFamily::kPoint;
    case TransformKind::kOcclusion:
    case TransformKind::kRotation:
    case TransformKind::kShear:
    case TransformKind::kScale:
    case TransformKind::kTranslation:
    case TransformKind::kReflection:
      return TransformFamily::kGeometric;
    default:
      return TransformFamily::kOther;
  }
}

ParamArity arity(TransformKind kind) {
  switch (kind) {
    case TransformKind::kOcclusion:
    case TransformKind::kShear:
    case TransformKind::kScale:
    case TransformKind::kTranslation:
      return ParamArity::kPair;
    case TransformKind::kReflection:
      return ParamArity::kDirection;
    case TransformKind::kComposite:
      return ParamArity::kTuple;
    case TransformKind::kPlugin:
      return ParamArity::kAny;
    default:
      return ParamArity::kScalar;
  }
}

TransformSpec TransformSpec::occlusion(Image mask) {
  auto s = TransformSpec::of(TransformKind::kOcclusion);
  s.mask = std::move(mask);
  return s;
}

TransformSpec TransformSpec::fog(Image mask) {
  auto s = TransformSpec::of(TransformKind::kFog);
  s.mask = std::move(mask);
  return s;
}

TransformSpec TransformSpec::composite(std::vector<TransformSpec> parts) {
  if (parts.size() < 2) throw DomainError("composite needs at least 2 parts");
  auto s = TransformSpec::of(TransformKind::kComposite);
  s.parts = std::move(parts);
  return s;
}

TransformSpec TransformSpec::from_plugin(
    std::shared_ptr<const PluginTransform> p) {
  if (!p) throw DomainError("null plugin");
  auto s = TransformSpec::of(TransformKind::kPlugin);
  s.plugin = std::move(p);
  return s;
}

int kernel_size(TransformKind kind, Dims dims, const ParamValue& c) {
  const double v = c.scalar();
  if (!is_integer(v)) throw DomainError("kernel size must be an integer");
  const int s = std::min(dims.width, dims.height);
  if (v < 2 || v > s) {
    throw DomainError("kernel size " + to_string(c) + " outside [2, " +
                      std::to_string(s) + "]");
  }
  const int k = static_cast<int>(v);
  if (kind == TransformKind::kMedianSmooth && k % 2 == 0) {
    throw DomainError("median kernel size must be odd");
  }
  return k;
}

std::uint8_t contrast_value(double gain, std::uint8_t v) {
  const double product = gain * v;
  if (!(product > 0.0)) return 0;
  if (product >= 255.0) return 255;
  double base = std::floor(product);
  if (product - base > 1.0 - 1e-9) base += 1.0;
  return static_cast<std::uint8_t>(std::min(base, 255.0));
}

Image apply(const TransformSpec& spec, const Image& img, const ParamValue& c) {
  const Dims dims = img.dims();
  switch (spec.kind) {
    case TransformKind::kAvgSmooth:
    case TransformKind::kMedianSmooth:
    case TransformKind::kErosion:
    case TransformKind::kDilation:
      return box_reduce(img, kernel_size(spec.kind, dims, c), spec.kind);
    case TransformKind::kContrast: {
      const double gain = c.scalar();
      if (!std::isfinite(gain)) throw DomainError("gain must be finite");
      std::array<std::uint8_t, 256> lut{};
      for (int v = 0; v < 256; ++v) {
        lut[v] = contrast_value(gain, static_cast<std::uint8_t>(v));
      }
      Image out = img;
      for (auto& p : out.mutable_pixels()) p = lut[p];
      return out;
    }
    case TransformKind::kBrightness: {
      const double bias = c.scalar();
      if (!std::isfinite(bias)) throw DomainError("bias must be finite");
      std::array<std::uint8_t, 256> lut{};
      for (int v = 0; v < 256; ++v) lut[v] = clamp_pixel(v + bias);
      Image out = img;
      for (auto& p : out.mutable_pixels()) p = lut[p];
      return out;
    }
    case TransformKind::kOcclusion: {
      const auto [x0, y0] = occlusion_origin(spec, dims, c);
      const auto& m = *spec.mask;
      check_mask_channels(m, img);
      Image out = img;
      for (int j = 0; j < m.height(); ++j) {
        for (int i = 0; i < m.width(); ++i) {
          for (int k = 0; k < img.channels(); ++k) {
            out.at(x0 + i, y0 + j, k) = mask_value(m, i, j, k);
          }
        }
      }
      return out;
    }
    case TransformKind::kRotation:
    case TransformKind::kShear:
    case TransformKind::kScale:
    case TransformKind::kTranslation:
    case TransformKind::kReflection: {
      if (spec.kind == TransformKind::kRotation) {
        if (!std::isfinite(c.scalar())) throw DomainError("angle must be finite");
      } else if (spec.kind != TransformKind::kReflection) {
        check_pair_finite(spec.kind, c);
      }
      const GeometricMap map(spec.kind, dims, c);
      Image out = Image::filled(img.width(), img.height(), img.channels(), 0);
      for (int j = 0; j < img.height(); ++j) {
        for (int i = 0; i < img.width(); ++i) {
          const Coord d = map(i, j);
          if (!in_bounds(dims, d)) continue;
          for (int k = 0; k < img.channels(); ++k) out.at(d.i, d.j, k) = img.at(i, j, k);
        }
      }
      return out;
    }
    case TransformKind::kFog: {
      if (!spec.mask) throw DomainError("fog requires a mask image");
      return apply_fog(img, *spec.mask, kernel_size(spec.kind, dims, c));
    }
    case TransformKind::kComposite: {
      const auto& t = c.tuple();
      if (t.size() != spec.parts.size()) {
        throw DomainError("composite parameter arity mismatch");
      }
      Image cur = img;
      for (std::size_t k = 0; k < t.size(); ++k) cur = apply(spec.parts[k], cur, t[k]);
      return cur;
    }
    case TransformKind::kPlugin: {
      if (!spec.plugin) throw DomainError("plugin transform without plugin");
      Image out = spec.plugin->apply(img, c);
      if (out.dims() != img.dims() || out.channels() != img.channels()) {
        throw DomainError("plugin changed image dimensions");
      }
      return out;
    }
  }
  throw DomainError("unhandled transform kind");
}

Image apply_fog(const Image& img, const Image& mask, int kernel) {
  if (mask.dims() != img.dims()) {
    throw DomainError("fog mask dimensions must match the image");
  }
  check_mask_channels(mask, img);
  const Image smoothed =
      apply(TransformSpec::of(TransformKind::kAvgSmooth), mask, ParamValue(kernel));
  Image out = img;
  for (int j = 0; j < img.height(); ++j) {
    for (int i = 0; i < img.width(); ++i) {
      for (int k = 0; k < img.channels(); ++k) {
        out.at(i, j, k) =
            clamp_pixel((img.at(i, j, k) + mask_value(smoothed, i, j, k)) / 2.0);
      }
    }
  }
  return out;
}

std::vector<Coord> dependent_pixels(const TransformSpec& spec, Dims dims,
                                    Coord coord, const ParamValue& c) {
  if (!in_bounds(dims, coord)) throw DomainError("coordinate out of bounds");
  switch (family(spec.kind)) {
    case TransformFamily::kConvolution: {
      const int k = kernel_size(spec.kind, dims, c);
      const int b = window_begin(k);
      std::vector<Coord> out;
      out.reserve(static_cast<std::size_t>(k) * k);
      for (int dj = 0; dj < k; ++dj) {
        for (int di = 0; di < k; ++di) {
          out.push_back({clamp_index(coord.i + b + di, dims.width),
                         clamp_index(coord.j + b + dj, dims.height)});
        }
      }
      return out;
    }
    case TransformFamily::kPoint:
      if (!std::isfinite(c.scalar())) throw DomainError("parameter must be finite");
      return {coord};
    case TransformFamily::kGeometric: {
      if (spec.kind == TransformKind::kOcclusion) {
        const auto [x0, y0] = occlusion_origin(spec, dims, c);
        const bool inside = coord.i >= x0 && coord.i < x0 + spec.mask->width() &&
                            coord.j >= y0 && coord.j < y0 + spec.mask->height();
        if (inside) return {};
        return {coord};
      }
      if (spec.kind == TransformKind::kRotation) {
        if (!std::isfinite(c.scalar())) throw DomainError("angle must be finite");
      } else if (spec.kind != TransformKind::kReflection) {
        check_pair_finite(spec.kind, c);
      }
      const Coord d = GeometricMap(spec.kind, dims, c)(coord.i, coord.j);
      if (!in_bounds(dims, d)) return {};
      return {d};
    }
    case TransformFamily::kOther:
      break;
  }
  throw DomainError(std::string(kind_name(spec.kind)) +
                    " has no dependent-pixel decomposition");
}

std::uint8_t dependence_function(const TransformSpec& spec,
                                 std::span<const std::uint8_t> values,
                                 const ParamValue& c) {
  if (values.empty()) throw DomainError("dependence function needs values");
  switch (family(spec.kind)) {
    case TransformFamily::kConvolution: {
      const double k = c.scalar();
      if (!is_integer(k) || k < 2 ||
          static_cast<double>(values.size()) != k * k) {
        throw DomainError("dependence function arity mismatch for kernel " +
                          to_string(c));
      }
      if (spec.kind == TransformKind::kMedianSmooth &&
          static_cast<long long>(k) % 2 == 0) {
        throw DomainError("median kernel size must be odd");
      }
      switch (spec.kind) {
        case TransformKind::kAvgSmooth: {
          long long s = 0;
          for (auto v : values) s += v;
          const long long n = static_cast<long long>(values.size());
          return static_cast<std::uint8_t>((2 * s + n) / (2 * n));
        }
        case TransformKind::kMedianSmooth: {
          std::vector<std::uint8_t> w(values.begin(), values.end());
          auto mid = w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2);
          std::nth_element(w.begin(), mid, w.end());
          return *mid;
        }
        case TransformKind::kErosion:
          return *std::min_element(values.begin(), values.end());
        default:
          return *std::max_element(values.begin(), values.end());
      }
    }
    case TransformFamily::kPoint:
      if (values.size() != 1) throw DomainError("point transforms take one value");
      if (spec.kind == TransformKind::kContrast) {
        return contrast_value(c.scalar(), values[0]);
      }
      return clamp_pixel(values[0] + c.scalar());
    case TransformFamily::kGeometric:
      if (values.size() != 1) {
        throw DomainError("geometric transforms take one value");
      }
      return values[0];
    case TransformFamily::kOther:
      break;
  }
  throw DomainError(std::string(kind_name(spec.kind)) +
                    " has no dependence-function decomposition");
}

}  // namespace imverify
