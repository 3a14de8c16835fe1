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
#ifndef IMVERIFY_PARAMS_HPP_
#define IMVERIFY_PARAMS_HPP_

#include <array>
#include <compare>
#include <string>
#include <variant>
#include <vector>

namespace imverify {

enum class Reflection { kHorizontal = 0, kVertical = 1, kCentral = 2 };

std::string reflection_name(Reflection r);
Reflection reflection_from_name(const std::string& name);

// A transformation parameter: a real scalar (kernel size, gain, bias, angle),
// a pair (placement, shear, scale, shift), a reflection direction, or a tuple
// of component parameters for composite transforms.
class ParamValue {
 public:
  using Pair = std::array<double, 2>;
  using Tuple = std::vector<ParamValue>;

  ParamValue() : value_(0.0) {}
  ParamValue(double v) : value_(v) {}  // NOLINT(runtime/explicit)
  ParamValue(Pair p) : value_(p) {}    // NOLINT(runtime/explicit)
  ParamValue(Reflection r) : value_(r) {}  // NOLINT(runtime/explicit)
  ParamValue(Tuple t) : value_(std::move(t)) {}  // NOLINT(runtime/explicit)

  static ParamValue pair(double a, double b) { return ParamValue(Pair{a, b}); }

  bool is_scalar() const { return std::holds_alternative<double>(value_); }
  bool is_pair() const { return std::holds_alternative<Pair>(value_); }
  bool is_reflection() const {
    return std::holds_alternative<Reflection>(value_);
  }
  bool is_tuple() const { return std::holds_alternative<Tuple>(value_); }

  // Accessors throw DomainError on a type mismatch.
  double scalar() const;
  const Pair& as_pair() const;
  Reflection reflection() const;
  const Tuple& tuple() const;

  friend bool operator==(const ParamValue& a, const ParamValue& b);
  friend std::strong_ordering operator<=>(const ParamValue& a,
                                          const ParamValue& b);

 private:
  std::variant<double, Pair, Reflection, Tuple> value_;
};

std::string to_string(const ParamValue& p);

// One axis of a parameter space. Integral axes only admit integer values.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool integral = false;

  bool contains(double v) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// The user-specified parameter space C attached to a safety property.
//  - scalar kinds use axes[0];
//  - pair kinds use axes[0] (horizontal) and axes[1] (vertical);
//  - reflection uses `directions`;
//  - composites use `parts`, one per component.
struct ParamSpace {
  std::vector<Interval> axes;
  std::vector<Reflection> directions;
  std::vector<ParamSpace> parts;

  static ParamSpace scalar(double lo, double hi, bool integral = false) {
    return ParamSpace{{Interval{lo, hi, integral}}, {}, {}};
  }
  static ParamSpace pair(Interval x, Interval y) {
    return ParamSpace{{x, y}, {}, {}};
  }
  static ParamSpace reflections(std::vector<Reflection> dirs) {
    return ParamSpace{{}, std::move(dirs), {}};
  }
  static ParamSpace composite(std::vector<ParamSpace> parts) {
    return ParamSpace{{}, {}, std::move(parts)};
  }

  friend bool operator==(const ParamSpace&, const ParamSpace&) = default;
};

bool space_contains(const ParamSpace& space, const ParamValue& value);

}  // namespace imverify

#endif  // IMVERIFY_PARAMS_HPP_
