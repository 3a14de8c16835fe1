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
#ifndef IMVERIFY_CRITICAL_HPP_
#define IMVERIFY_CRITICAL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imverify/image.hpp"
#include "imverify/params.hpp"
#include "imverify/transforms.hpp"

namespace imverify {

// Strictly increasing finite parameter sequence such that every parameter in
// the space between two consecutive members produces the output of one of
// them. Computed from image dimensions only, never pixel content.
struct CriticalParamSet {
  TransformSpec spec;
  ParamSpace space;
  Dims dims;
  std::vector<ParamValue> values;

  std::size_t size() const { return values.size(); }
};

// Table-style default parameter spaces (kernel [2,10] / [2,5], gain [0.5,2],
// bias [-100,100], angle [-2,2] degrees, ...). Occlusion defaults to every
// placement inside the image.
ParamSpace default_space(TransformKind kind);

// Throws DomainError if `space` is not well-typed for `spec`.
void validate_space(const TransformSpec& spec, const ParamSpace& space);

// Computes the critical set. `workers` <= 0 means hardware concurrency; the
// result is identical for every worker count. Throws DomainError when the
// space contains no valid parameter for these dimensions.
CriticalParamSet critical_params(const TransformSpec& spec,
                                 const ParamSpace& space, Dims dims,
                                 int workers = 0);

// Lexicographic Cartesian product; each value is a tuple.
CriticalParamSet compose(const std::vector<CriticalParamSet>& sets);

// Inverse of the dependent-pixel map: a parameter for which `coord` depends on
// `target`, or nullopt. For continuous parameters this is the infimum of the
// feasible cell (nudged up by ulps until it is itself feasible); for
// parameters that do not influence the map it is the identity parameter.
std::optional<ParamValue> invert_dp(const TransformSpec& spec, Dims dims,
                                    Coord coord, Coord target);

// Inverse of the dependence function: the minimal parameter producing
// `target` from `input_values`, or nullopt.
std::optional<ParamValue> invert_df(const TransformSpec& spec,
                                    std::span<const std::uint8_t> input_values,
                                    std::uint8_t target);

// |critical_params(spec, space, dims)| without materializing product sets.
std::size_t critical_count(const TransformSpec& spec, const ParamSpace& space,
                           Dims dims);

struct CountBound {
  std::string complexity;  // "O(1)", "O(n)", "O(n^2)", "O(n^3)", ...
  std::size_t count = 0;
};

CountBound count_bound(const TransformSpec& spec, const ParamSpace& space,
                       Dims dims);

// Building blocks, exposed for tests and tooling.

// Angles (degrees, strictly inside (lo, hi)) at which some pixel's rotated
// coordinate crosses a half-integer grid line, deduplicated within 1e-9.
std::vector<double> rotation_boundaries(Dims dims, double lo, double hi,
                                        int workers = 0);

// Distinct values (m + 0.5) / q strictly inside (lo, hi), for q in
// [1, max_multiplier] and m in [m_lo, m_hi]: the parameters at which
// round(q * c) changes between m and m + 1.
std::vector<double> linear_boundaries(int max_multiplier, int m_lo, int m_hi,
                                      double lo, double hi);

// {lo, midpoints of consecutive boundaries (with lo and hi as outer
// boundaries), hi}: one value per open cell plus both endpoints.
std::vector<double> cell_representatives(const std::vector<double>& boundaries,
                                         double lo, double hi);

// Distinct quotients m / n, m in [0, 255], n in [1, 255], inside [lo, hi].
std::vector<double> contrast_fractions(double lo, double hi);

}  // namespace imverify

#endif  // IMVERIFY_CRITICAL_HPP_
