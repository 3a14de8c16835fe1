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
#include "imverify/oracle.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <optional>

#include "imverify/detail/parallel.hpp"

namespace imverify::oracle {

namespace {

std::vector<double> axis_grid(const Interval& iv, double step, Dims dims) {
  std::vector<double> out;
  if (iv.integral) {
    const double clip = dims.width + dims.height;
    const double lo = std::isfinite(iv.lo) ? iv.lo : -clip;
    const double hi = std::isfinite(iv.hi) ? iv.hi : clip;
    for (double v = std::ceil(lo); v <= hi; v += 1.0) out.push_back(v);
    return out;
  }
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw DomainError("dense sweep needs a bounded real interval");
  }
  if (!(step > 0)) throw DomainError("sweep step must be positive");
  const auto n = static_cast<long long>(std::floor((iv.hi - iv.lo) / step));
  out.reserve(static_cast<std::size_t>(n) + 2);
  for (long long k = 0; k <= n; ++k) {
    const double v = iv.lo + static_cast<double>(k) * step;
    if (v > iv.hi) break;
    out.push_back(v);
  }
  if (out.empty() || out.back() != iv.hi) out.push_back(iv.hi);
  return out;
}

OutputSet evaluate(const Image& img, const TransformSpec& spec,
                   std::size_t n,
                   const std::function<ParamValue(std::size_t)>& param_at,
                   SweepStats* stats, int workers) {
  std::vector<std::optional<Digest>> digests(n);
  detail::parallel_for(n, workers, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t k = begin; k < end; ++k) {
      try {
        digests[k] = image_digest(apply(spec, img, param_at(k)));
      } catch (const DomainError&) {
        digests[k] = std::nullopt;
      }
    }
  });
  OutputSet out;
  SweepStats local;
  for (std::size_t k = 0; k < n; ++k) {
    if (!digests[k]) {
      ++local.skipped;
      continue;
    }
    ++local.evaluated;
    auto it = out.find(*digests[k]);
    const ParamValue p = param_at(k);
    if (it == out.end()) {
      out.emplace(*digests[k], p);
    } else if (p < it->second) {
      it->second = p;
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace

SweepGrid::SweepGrid(const ParamSpace& space, double step, Dims dims) {
  if (!space.parts.empty()) {
    shape_ = Shape::kTuple;
    size_ = 1;
    for (const auto& p : space.parts) {
      parts_.emplace_back(p, step, dims);
      size_ *= parts_.back().size();
    }
    return;
  }
  if (!space.directions.empty()) {
    shape_ = Shape::kDirection;
    directions_ = space.directions;
    std::sort(directions_.begin(), directions_.end());
    directions_.erase(std::unique(directions_.begin(), directions_.end()),
                      directions_.end());
    size_ = directions_.size();
    return;
  }
  if (space.axes.size() == 1) {
    shape_ = Shape::kScalar;
  } else if (space.axes.size() == 2) {
    shape_ = Shape::kPair;
  } else {
    throw DomainError("unsupported parameter space shape for sweeping");
  }
  size_ = 1;
  for (const auto& iv : space.axes) {
    axes_.push_back(axis_grid(iv, step, dims));
    size_ *= axes_.back().size();
  }
}

ParamValue SweepGrid::at(std::size_t index) const {
  switch (shape_) {
    case Shape::kScalar:
      return axes_[0][index];
    case Shape::kPair: {
      const std::size_t ny = axes_[1].size();
      return ParamValue::pair(axes_[0][index / ny], axes_[1][index % ny]);
    }
    case Shape::kDirection:
      return directions_[index];
    case Shape::kTuple: {
      ParamValue::Tuple t(parts_.size());
      for (std::size_t k = parts_.size(); k-- > 0;) {
        t[k] = parts_[k].at(index % parts_[k].size());
        index /= parts_[k].size();
      }
      return t;
    }
  }
  return {};
}

OutputSet dense_sweep(const Image& img, const TransformSpec& spec,
                      const ParamSpace& space, double step, SweepStats* stats,
                      int workers) {
  const SweepGrid grid(space, step, img.dims());
  return evaluate(img, spec, grid.size(),
                  [&](std::size_t k) { return grid.at(k); }, stats, workers);
}

OutputSet outputs_of(const Image& img, const TransformSpec& spec,
                     const std::vector<ParamValue>& params, int workers) {
  return evaluate(img, spec, params.size(),
                  [&](std::size_t k) { return params[k]; }, nullptr, workers);
}

CoverageReport coverage_check(const OutputSet& critical, const OutputSet& sweep) {
  CoverageReport r;
  for (const auto& [d, p] : sweep) {
    if (!critical.contains(d)) r.missing.emplace_back(d, p);
  }
  for (const auto& [d, p] : critical) {
    if (!sweep.contains(d)) r.surplus.emplace_back(d, p);
  }
  return r;
}

}  // namespace imverify::oracle
