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
#ifndef IMVERIFY_ORACLE_HPP_
#define IMVERIFY_ORACLE_HPP_

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "imverify/image.hpp"
#include "imverify/params.hpp"
#include "imverify/transforms.hpp"

// Brute-force ground truth for critical sets. Everything here calls only
// imverify::apply; it never consults dependent pixels, dependence functions
// or the critical-set constructions it is meant to check.
//
// A dense sweep corroborates completeness for continuous parameters; it
// cannot prove it. Parameters landing exactly on a cell boundary are a
// measure-zero event the sweep is not expected to hit.

namespace imverify::oracle {

// Distinct outputs keyed by digest, each with the smallest parameter that
// produced it.
using OutputSet = std::map<Digest, ParamValue>;

// The sweep grid: per real axis lo, lo + step, ..., plus hi exactly; per
// integral axis every integer (step ignored); every listed reflection; the
// product for pairs and composites. Infinite integral bounds are clipped to
// +-(W + H), beyond which placements are invalid and shifts empty the image.
class SweepGrid {
 public:
  SweepGrid(const ParamSpace& space, double step, Dims dims);

  std::size_t size() const { return size_; }
  ParamValue at(std::size_t index) const;

 private:
  enum class Shape { kScalar, kPair, kDirection, kTuple };
  Shape shape_ = Shape::kScalar;
  std::vector<std::vector<double>> axes_;
  std::vector<Reflection> directions_;
  std::vector<SweepGrid> parts_;
  std::size_t size_ = 0;
};

struct SweepStats {
  std::size_t evaluated = 0;
  // Grid points outside the transform's domain (apply threw DomainError).
  std::size_t skipped = 0;
};

OutputSet dense_sweep(const Image& img, const TransformSpec& spec,
                      const ParamSpace& space, double step,
                      SweepStats* stats = nullptr, int workers = 0);

// Outputs of an explicit parameter list (e.g. a critical set).
OutputSet outputs_of(const Image& img, const TransformSpec& spec,
                     const std::vector<ParamValue>& params, int workers = 0);

struct CoverageReport {
  std::vector<std::pair<Digest, ParamValue>> missing;  // sweep \ critical
  std::vector<std::pair<Digest, ParamValue>> surplus;  // critical \ sweep

  bool complete() const { return missing.empty() && surplus.empty(); }
};

CoverageReport coverage_check(const OutputSet& critical, const OutputSet& sweep);

}  // namespace imverify::oracle

#endif  // IMVERIFY_ORACLE_HPP_
