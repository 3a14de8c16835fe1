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
#include "imverify/critical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "imverify/detail/parallel.hpp"

namespace imverify {

namespace {

constexpr double kAngleTolerance = 1e-9;  // degrees
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

[[noreturn]] void empty_set(const TransformSpec& spec, Dims dims) {
  throw DomainError("critical set for " + std::string(kind_name(spec.kind)) +
                    " at " + std::to_string(dims.width) + "x" +
                    std::to_string(dims.height) +
                    " is empty: the parameter space contains no valid value");
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Integers in [lo, hi] intersected with [floor_lo, floor_hi].
std::vector<double> integers_between(double lo, double hi, double clip_lo,
                                     double clip_hi) {
  std::vector<double> out;
  const double a = std::max(std::ceil(lo), clip_lo);
  const double b = std::min(std::floor(hi), clip_hi);
  for (double v = a; v <= b; v += 1.0) out.push_back(v);
  return out;
}

void add_finite_endpoints(std::vector<double>& v, const Interval& axis) {
  if (std::isfinite(axis.lo)) v.push_back(axis.lo);
  if (std::isfinite(axis.hi)) v.push_back(axis.hi);
  sort_unique(v);
}

std::vector<ParamValue> scalars(const std::vector<double>& v) {
  return {v.begin(), v.end()};
}

std::vector<ParamValue> pairs(const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  std::vector<ParamValue> out;
  out.reserve(xs.size() * ys.size());
  for (double x : xs) {
    for (double y : ys) out.push_back(ParamValue::pair(x, y));
  }
  return out;
}

std::vector<double> kernel_values(TransformKind kind, const Interval& axis,
                                  Dims dims) {
  const double s = std::min(dims.width, dims.height);
  auto v = integers_between(axis.lo, axis.hi, 2.0, s);
  if (kind == TransformKind::kMedianSmooth) {
    std::erase_if(v, [](double k) { return static_cast<long long>(k) % 2 == 0; });
  }
  return v;
}

std::vector<double> translation_axis(const Interval& axis, int extent) {
  // Shifts of magnitude >= extent all empty the canvas.
  auto v = integers_between(axis.lo, axis.hi, -extent, extent);
  add_finite_endpoints(v, axis);
  return v;
}

const Interval& axis_at(const ParamSpace& space, std::size_t k) {
  return space.axes.at(k);
}

// Range of r * cos(psi + theta) for theta in [lo, hi] (radians).
std::pair<double, double> cosine_range(double r, double psi, double lo,
                                       double hi) {
  if (hi - lo >= 2 * std::numbers::pi) return {-r, r};
  double mn = std::min(r * std::cos(psi + lo), r * std::cos(psi + hi));
  double mx = std::max(r * std::cos(psi + lo), r * std::cos(psi + hi));
  auto contains_multiple = [&](double offset) {
    // Is there an integer n with psi + theta = offset + 2*pi*n in [lo, hi]?
    const double t0 = (psi + lo - offset) / (2 * std::numbers::pi);
    const double t1 = (psi + hi - offset) / (2 * std::numbers::pi);
    return std::floor(t1) >= std::ceil(t0);
  };
  if (contains_multiple(0.0)) mx = r;
  if (contains_multiple(std::numbers::pi)) mn = -r;
  return {mn, mx};
}

void rotation_pixel_boundaries(double x, double y, double cx, double cy,
                               int w, int h, double lo_deg, double hi_deg,
                               std::vector<double>& out) {
  const double r = std::hypot(x, y);
  if (r == 0.0) return;
  const double phi = std::atan2(y, x);
  const double lo = lo_deg * std::numbers::pi / 180.0;
  const double hi = hi_deg * std::numbers::pi / 180.0;
  // x' = r cos(phi + t); y' = r sin(phi + t) = r cos(phi - pi/2 + t).
  const double psis[2] = {phi, phi - std::numbers::pi / 2};
  const double centers[2] = {cx, cy};
  const int extents[2] = {w, h};
  for (int axis = 0; axis < 2; ++axis) {
    const double psi = psis[axis];
    auto [mn, mx] = cosine_range(r, psi, lo, hi);
    const double c = centers[axis];
    // Grid lines at absolute k + 0.5, i.e. center-relative k + 0.5 - c.
    const double k_lo = std::max(-1.0, std::ceil(mn + c - 0.5 - 1e-12));
    const double k_hi =
        std::min(extents[axis] - 1.0, std::floor(mx + c - 0.5 + 1e-12));
    for (double k = k_lo; k <= k_hi; k += 1.0) {
      const double a = k + 0.5 - c;
      if (std::abs(a) > r) continue;
      const double base = std::acos(a / r);
      for (double sol : {base - psi, -base - psi}) {
        const double deg = sol * 180.0 / std::numbers::pi;
        const double n0 = std::ceil((lo_deg - deg) / 360.0);
        for (double n = n0;; n += 1.0) {
          const double t = deg + 360.0 * n;
          if (t >= hi_deg) break;
          if (t > lo_deg) out.push_back(t);
        }
      }
    }
  }
}

std::vector<double> continuous_axis(TransformKind kind, int axis,
                                    const Interval& iv, Dims dims) {
  const int w = dims.width;
  const int h = dims.height;
  std::vector<double> b;
  if (kind == TransformKind::kShear) {
    // i + round(j * cW): multiplier j, offset m = k - i spans [-W, W-1].
    b = axis == 0 ? linear_boundaries(h - 1, -w, w - 1, iv.lo, iv.hi)
                  : linear_boundaries(w - 1, -h, h - 1, iv.lo, iv.hi);
  } else {
    b = axis == 0 ? linear_boundaries(w - 1, -1, w - 1, iv.lo, iv.hi)
                  : linear_boundaries(h - 1, -1, h - 1, iv.lo, iv.hi);
  }
  return cell_representatives(b, iv.lo, iv.hi);
}

ParamValue identity_param(TransformKind kind) {
  switch (kind) {
    case TransformKind::kContrast:
      return 1.0;
    case TransformKind::kScale:
      return ParamValue::pair(1.0, 1.0);
    case TransformKind::kShear:
    case TransformKind::kTranslation:
    case TransformKind::kOcclusion:
      return ParamValue::pair(0.0, 0.0);
    case TransformKind::kReflection:
      return Reflection::kHorizontal;
    default:
      return 0.0;
  }
}

bool maps_to(const TransformSpec& spec, Dims dims, Coord coord,
             const ParamValue& c, Coord target) {
  const auto dp = dependent_pixels(spec, dims, coord, c);
  return std::find(dp.begin(), dp.end(), target) != dp.end();
}

// Moves a continuous infimum up by ulps until the parameter itself is
// feasible; floating-point products can land just below a tie.
std::optional<double> nudge_scalar(double v,
                                   const std::function<bool(double)>& ok) {
  for (int step = 0; step < 64; ++step) {
    if (ok(v)) return v;
    v = std::nextafter(v, kInf);
  }
  return std::nullopt;
}

}  // namespace

ParamSpace default_space(TransformKind kind) {
  switch (kind) {
    case TransformKind::kAvgSmooth:
    case TransformKind::kMedianSmooth:
    case TransformKind::kFog:
      return ParamSpace::scalar(2, 10, true);
    case TransformKind::kErosion:
    case TransformKind::kDilation:
      return ParamSpace::scalar(2, 5, true);
    case TransformKind::kContrast:
      return ParamSpace::scalar(0.5, 2.0);
    case TransformKind::kBrightness:
      return ParamSpace::scalar(-100, 100, true);
    case TransformKind::kOcclusion:
      return ParamSpace::pair({-kInf, kInf, true}, {-kInf, kInf, true});
    case TransformKind::kRotation:
      return ParamSpace::scalar(-2.0, 2.0);
    case TransformKind::kShear:
      return ParamSpace::pair({-0.01, 0.01}, {-0.01, 0.01});
    case TransformKind::kScale:
      return ParamSpace::pair({0.99, 1.01}, {0.99, 1.01});
    case TransformKind::kTranslation:
      return ParamSpace::pair({-10, 10, true}, {-10, 10, true});
    case TransformKind::kReflection:
      return ParamSpace::reflections(
          {Reflection::kHorizontal, Reflection::kVertical, Reflection::kCentral});
    default:
      throw DomainError("no default space for " + std::string(kind_name(kind)));
  }
}

void validate_space(const TransformSpec& spec, const ParamSpace& space) {
  const auto kind = spec.kind;
  auto check_axis = [&](const Interval& iv, bool may_be_infinite) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) {
      throw DomainError("parameter interval must satisfy lo <= hi");
    }
    if (!may_be_infinite && (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))) {
      throw DomainError(std::string(kind_name(kind)) +
                        " requires a bounded parameter interval");
    }
    if (iv.integral && ((std::isfinite(iv.lo) && !is_integer(iv.lo)) ||
                        (std::isfinite(iv.hi) && !is_integer(iv.hi)))) {
      throw DomainError("integral interval needs integer endpoints");
    }
  };
  switch (arity(kind)) {
    case ParamArity::kScalar: {
      if (space.axes.size() != 1) {
        throw DomainError(std::string(kind_name(kind)) +
                          " takes a scalar parameter space");
      }
      const bool kernel = family(kind) == TransformFamily::kConvolution ||
                          kind == TransformKind::kFog;
      check_axis(space.axes[0], kernel);
      return;
    }
    case ParamArity::kPair: {
      if (space.axes.size() != 2) {
        throw DomainError(std::string(kind_name(kind)) +
                          " takes a two-axis parameter space");
      }
      const bool unbounded_ok = kind == TransformKind::kOcclusion ||
                                kind == TransformKind::kTranslation;
      check_axis(space.axes[0], unbounded_ok);
      check_axis(space.axes[1], unbounded_ok);
      return;
    }
    case ParamArity::kDirection:
      if (space.directions.empty()) {
        throw DomainError("reflection space needs at least one direction");
      }
      return;
    case ParamArity::kTuple:
      if (space.parts.size() != spec.parts.size()) {
        throw DomainError("composite space arity mismatch");
      }
      for (std::size_t k = 0; k < spec.parts.size(); ++k) {
        validate_space(spec.parts[k], space.parts[k]);
      }
      return;
    case ParamArity::kAny:
      return;
  }
}

std::vector<double> linear_boundaries(int max_multiplier, int m_lo, int m_hi,
                                      double lo, double hi) {
  std::vector<double> out;
  for (int q = 1; q <= max_multiplier; ++q) {
    const double a = std::max<double>(m_lo, std::ceil(lo * q - 0.5));
    const double b = std::min<double>(m_hi, std::floor(hi * q - 0.5));
    for (double m = a; m <= b; m += 1.0) {
      // (2m + 1) / (2q) is correctly rounded, so equal rationals collide.
      const double v = (2.0 * m + 1.0) / (2.0 * q);
      if (v > lo && v < hi) out.push_back(v);
    }
  }
  sort_unique(out);
  return out;
}

std::vector<double> rotation_boundaries(Dims dims, double lo, double hi,
                                        int workers) {
  const int w = dims.width;
  const int h = dims.height;
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const int nworkers = detail::resolve_workers(workers);
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(nworkers));
  detail::parallel_for(static_cast<std::size_t>(h), nworkers,
                       [&](std::size_t begin, std::size_t end, int t) {
                         auto& out = partial[static_cast<std::size_t>(t)];
                         for (std::size_t j = begin; j < end; ++j) {
                           for (int i = 0; i < w; ++i) {
                             rotation_pixel_boundaries(i - cx, j - cy, cx, cy, w, h,
                                                       lo, hi, out);
                           }
                         }
                       });
  std::vector<double> all;
  for (auto& p : partial) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  std::vector<double> merged;
  for (double v : all) {
    if (merged.empty() || v - merged.back() > kAngleTolerance) merged.push_back(v);
  }
  // Boundaries indistinguishable from an endpoint belong to it.
  std::erase_if(merged, [&](double v) {
    return v - lo <= kAngleTolerance || hi - v <= kAngleTolerance;
  });
  return merged;
}

std::vector<double> cell_representatives(const std::vector<double>& boundaries,
                                         double lo, double hi) {
  if (lo == hi) return {lo};
  std::vector<double> out;
  out.reserve(boundaries.size() + 3);
  out.push_back(lo);
  double prev = lo;
  for (double b : boundaries) {
    out.push_back(prev + (b - prev) / 2);
    prev = b;
  }
  out.push_back(prev + (hi - prev) / 2);
  out.push_back(hi);
  sort_unique(out);
  return out;
}

std::vector<double> contrast_fractions(double lo, double hi) {
  std::vector<double> out;
  for (int n = 1; n <= 255; ++n) {
    for (int m = 0; m <= 255; ++m) {
      if (std::gcd(m, n) != 1) continue;  // keep reduced fractions only
      const double v = static_cast<double>(m) / n;
      if (v >= lo && v <= hi) out.push_back(v);
    }
  }
  sort_unique(out);
  return out;
}

CriticalParamSet critical_params(const TransformSpec& spec,
                                 const ParamSpace& space, Dims dims,
                                 int workers) {
  if (dims.width <= 0 || dims.height <= 0) {
    throw DomainError("dimensions must be positive");
  }
  validate_space(spec, space);
  CriticalParamSet out{spec, space, dims, {}};
  const auto kind = spec.kind;
  switch (kind) {
    case TransformKind::kAvgSmooth:
    case TransformKind::kMedianSmooth:
    case TransformKind::kErosion:
    case TransformKind::kDilation:
    case TransformKind::kFog:
      out.values = scalars(kernel_values(kind, space.axes[0], dims));
      break;
    case TransformKind::kContrast: {
      auto v = contrast_fractions(space.axes[0].lo, space.axes[0].hi);
      add_finite_endpoints(v, space.axes[0]);
      out.values = scalars(v);
      break;
    }
    case TransformKind::kBrightness: {
      const auto& iv = space.axes[0];
      auto v = integers_between(iv.lo, iv.hi, -255, 255);
      add_finite_endpoints(v, iv);
      out.values = scalars(v);
      break;
    }
    case TransformKind::kOcclusion: {
      if (!spec.mask) throw DomainError("occlusion requires a mask image");
      const int max_x = dims.width - spec.mask->width();
      const int max_y = dims.height - spec.mask->height();
      if (max_x < 0 || max_y < 0) empty_set(spec, dims);
      out.values = pairs(integers_between(axis_at(space, 0).lo,
                                          axis_at(space, 0).hi, 0, max_x),
                         integers_between(axis_at(space, 1).lo,
                                          axis_at(space, 1).hi, 0, max_y));
      break;
    }
    case TransformKind::kRotation: {
      const auto& iv = space.axes[0];
      out.values = scalars(cell_representatives(
          rotation_boundaries(dims, iv.lo, iv.hi, workers), iv.lo, iv.hi));
      break;
    }
    case TransformKind::kShear:
    case TransformKind::kScale:
      out.values = pairs(continuous_axis(kind, 0, space.axes[0], dims),
                         continuous_axis(kind, 1, space.axes[1], dims));
      break;
    case TransformKind::kTranslation:
      out.values = pairs(translation_axis(space.axes[0], dims.width),
                         translation_axis(space.axes[1], dims.height));
      break;
    case TransformKind::kReflection: {
      auto dirs = space.directions;
      std::sort(dirs.begin(), dirs.end());
      dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
      for (auto d : dirs) out.values.emplace_back(d);
      break;
    }
    case TransformKind::kComposite: {
      std::vector<CriticalParamSet> parts;
      for (std::size_t k = 0; k < spec.parts.size(); ++k) {
        parts.push_back(critical_params(spec.parts[k], space.parts[k], dims, workers));
      }
      out.values = compose(parts).values;
      break;
    }
    case TransformKind::kPlugin: {
      if (!spec.plugin) throw DomainError("plugin transform without plugin");
      out.values = spec.plugin->critical_values(space, dims);
      std::sort(out.values.begin(), out.values.end());
      out.values.erase(std::unique(out.values.begin(), out.values.end()),
                       out.values.end());
      break;
    }
  }
  if (out.values.empty()) empty_set(spec, dims);
  return out;
}

CriticalParamSet compose(const std::vector<CriticalParamSet>& sets) {
  if (sets.size() < 2) throw DomainError("compose needs at least two sets");
  CriticalParamSet out;
  out.dims = sets.front().dims;
  std::vector<TransformSpec> specs;
  std::vector<ParamSpace> spaces;
  std::size_t total = 1;
  for (const auto& s : sets) {
    if (s.values.empty()) throw DomainError("compose requires nonempty sets");
    specs.push_back(s.spec);
    spaces.push_back(s.space);
    total *= s.values.size();
  }
  out.spec = TransformSpec::composite(std::move(specs));
  out.space = ParamSpace::composite(std::move(spaces));
  out.values.reserve(total);
  std::vector<std::size_t> idx(sets.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    ParamValue::Tuple t;
    t.reserve(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) t.push_back(sets[k].values[idx[k]]);
    out.values.emplace_back(std::move(t));
    // Odometer increment, last component fastest.
    for (std::size_t k = sets.size(); k-- > 0;) {
      if (++idx[k] < sets[k].values.size()) break;
      idx[k] = 0;
    }
  }
  return out;
}

std::optional<ParamValue> invert_dp(const TransformSpec& spec, Dims dims,
                                    Coord coord, Coord target) {
  if (!in_bounds(dims, coord)) throw DomainError("coordinate out of bounds");
  const auto kind = spec.kind;
  switch (kind) {
    case TransformKind::kAvgSmooth:
    case TransformKind::kMedianSmooth:
    case TransformKind::kErosion:
    case TransformKind::kDilation: {
      const int s = std::min(dims.width, dims.height);
      for (int k = 2; k <= s; ++k) {
        if (kind == TransformKind::kMedianSmooth && k % 2 == 0) continue;
        if (maps_to(spec, dims, coord, ParamValue(k), target)) return ParamValue(k);
      }
      return std::nullopt;
    }
    case TransformKind::kContrast:
    case TransformKind::kBrightness:
      if (target == coord) return identity_param(kind);
      return std::nullopt;
    case TransformKind::kOcclusion: {
      if (!spec.mask) throw DomainError("occlusion requires a mask image");
      if (target != coord) return std::nullopt;
      for (int x = 0; x <= dims.width - spec.mask->width(); ++x) {
        for (int y = 0; y <= dims.height - spec.mask->height(); ++y) {
          const auto c = ParamValue::pair(x, y);
          if (maps_to(spec, dims, coord, c, target)) return c;
        }
      }
      return std::nullopt;
    }
    case TransformKind::kRotation: {
      // Cells of the full trajectory in [-180, 180).
      std::vector<double> starts{-180.0};
      std::vector<double> own;
      const double cx = (dims.width - 1) / 2.0;
      const double cy = (dims.height - 1) / 2.0;
      rotation_pixel_boundaries(coord.i - cx, coord.j - cy, cx, cy, dims.width,
                                dims.height, -180.0, 180.0, own);
      std::sort(own.begin(), own.end());
      starts.insert(starts.end(), own.begin(), own.end());
      for (std::size_t k = 0; k < starts.size(); ++k) {
        const double s = starts[k];
        const double e = k + 1 < starts.size() ? starts[k + 1] : 180.0;
        if (e - s <= kAngleTolerance) continue;
        if (!maps_to(spec, dims, coord, ParamValue(s + (e - s) / 2), target)) continue;
        auto v = nudge_scalar(s, [&](double a) {
          return maps_to(spec, dims, coord, ParamValue(a), target);
        });
        if (v) return ParamValue(*v);
        return ParamValue(s + (e - s) / 2);
      }
      return std::nullopt;
    }
    case TransformKind::kShear:
    case TransformKind::kScale: {
      const bool shear = kind == TransformKind::kShear;
      // Per axis: round(q * c) must equal d.
      auto solve = [&](int q, int d, double identity,
                       const std::function<bool(double)>& ok)
          -> std::optional<double> {
        if (q == 0) {
          if (d != 0) return std::nullopt;
          return identity;
        }
        return nudge_scalar((d - 0.5) / q, ok);
      };
      const int qx = shear ? coord.j : coord.i;
      const int dx = shear ? target.i - coord.i : target.i;
      const int qy = shear ? coord.i : coord.j;
      const int dy = shear ? target.j - coord.j : target.j;
      const double id = shear ? 0.0 : 1.0;
      auto cx = solve(qx, dx, id, [&](double c) { return round_half_up(qx * c) == dx; });
      auto cy = solve(qy, dy, id, [&](double c) { return round_half_up(qy * c) == dy; });
      if (!cx || !cy) return std::nullopt;
      const auto p = ParamValue::pair(*cx, *cy);
      if (!maps_to(spec, dims, coord, p, target)) return std::nullopt;
      return p;
    }
    case TransformKind::kTranslation: {
      const auto p = ParamValue::pair(target.i - coord.i, target.j - coord.j);
      if (!maps_to(spec, dims, coord, p, target)) return std::nullopt;
      return p;
    }
    case TransformKind::kReflection:
      for (auto r : {Reflection::kHorizontal, Reflection::kVertical,
                     Reflection::kCentral}) {
        if (maps_to(spec, dims, coord, ParamValue(r), target)) return ParamValue(r);
      }
      return std::nullopt;
    default:
      throw DomainError(std::string(kind_name(kind)) +
                        " has no dependent-pixel inverse");
  }
}

std::optional<ParamValue> invert_df(const TransformSpec& spec,
                                    std::span<const std::uint8_t> input_values,
                                    std::uint8_t target) {
  if (input_values.empty()) throw DomainError("invert_df needs input values");
  const auto kind = spec.kind;
  switch (family(kind)) {
    case TransformFamily::kConvolution: {
      const auto n = static_cast<double>(input_values.size());
      const double k = std::round(std::sqrt(n));
      if (k < 2 || k * k != n) return std::nullopt;
      if (kind == TransformKind::kMedianSmooth &&
          static_cast<long long>(k) % 2 == 0) {
        return std::nullopt;
      }
      if (dependence_function(spec, input_values, ParamValue(k)) != target) {
        return std::nullopt;
      }
      return ParamValue(k);
    }
    case TransformFamily::kPoint: {
      if (input_values.size() != 1) {
        throw DomainError("point transforms take one value");
      }
      const int v = input_values[0];
      if (kind == TransformKind::kBrightness) {
        return ParamValue(static_cast<double>(target) - v);
      }
      if (v == 0) {
        if (target != 0) return std::nullopt;
        return ParamValue(0.0);
      }
      return ParamValue(static_cast<double>(target) / v);
    }
    case TransformFamily::kGeometric:
      if (input_values.size() != 1) {
        throw DomainError("geometric transforms take one value");
      }
      if (input_values[0] != target) return std::nullopt;
      return identity_param(kind);
    case TransformFamily::kOther:
      break;
  }
  throw DomainError(std::string(kind_name(kind)) +
                    " has no dependence-function inverse");
}

std::size_t critical_count(const TransformSpec& spec, const ParamSpace& space,
                           Dims dims) {
  validate_space(spec, space);
  switch (spec.kind) {
    case TransformKind::kShear:
    case TransformKind::kScale: {
      const std::size_t n = continuous_axis(spec.kind, 0, space.axes[0], dims).size() *
                            continuous_axis(spec.kind, 1, space.axes[1], dims).size();
      if (n == 0) empty_set(spec, dims);
      return n;
    }
    case TransformKind::kTranslation:
      return translation_axis(space.axes[0], dims.width).size() *
             translation_axis(space.axes[1], dims.height).size();
    case TransformKind::kComposite: {
      std::size_t n = 1;
      for (std::size_t k = 0; k < spec.parts.size(); ++k) {
        n *= critical_count(spec.parts[k], space.parts[k], dims);
      }
      return n;
    }
    default:
      return critical_params(spec, space, dims).size();
  }
}

CountBound count_bound(const TransformSpec& spec, const ParamSpace& space,
                       Dims dims) {
  CountBound out;
  switch (spec.kind) {
    case TransformKind::kContrast:
    case TransformKind::kBrightness:
    case TransformKind::kReflection:
      out.complexity = "O(1)";
      break;
    case TransformKind::kRotation:
    case TransformKind::kScale:
      out.complexity = "O(n^2)";
      break;
    case TransformKind::kShear:
      out.complexity = "O(n^3)";
      break;
    case TransformKind::kComposite:
      out.complexity = "product";
      break;
    case TransformKind::kPlugin:
      out.complexity = "unknown";
      break;
    default:
      out.complexity = "O(n)";
      break;
  }
  out.count = critical_count(spec, space, dims);
  return out;
}

}  // namespace imverify
