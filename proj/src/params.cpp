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
#include "imverify/params.hpp"

#include <cmath>
#include <sstream>

#include "imverify/image.hpp"

namespace imverify {

std::string reflection_name(Reflection r) {
  switch (r) {
    case Reflection::kHorizontal:
      return "horizontal";
    case Reflection::kVertical:
      return "vertical";
    case Reflection::kCentral:
      return "central";
  }
  return "?";
}

Reflection reflection_from_name(const std::string& name) {
  if (name == "horizontal") return Reflection::kHorizontal;
  if (name == "vertical") return Reflection::kVertical;
  if (name == "central") return Reflection::kCentral;
  throw DomainError("unknown reflection direction '" + name + "'");
}

double ParamValue::scalar() const {
  if (const auto* v = std::get_if<double>(&value_)) return *v;
  throw DomainError("expected a scalar parameter, got " + to_string(*this));
}

const ParamValue::Pair& ParamValue::as_pair() const {
  if (const auto* v = std::get_if<Pair>(&value_)) return *v;
  throw DomainError("expected a pair parameter, got " + to_string(*this));
}

Reflection ParamValue::reflection() const {
  if (const auto* v = std::get_if<Reflection>(&value_)) return *v;
  throw DomainError("expected a reflection direction, got " + to_string(*this));
}

const ParamValue::Tuple& ParamValue::tuple() const {
  if (const auto* v = std::get_if<Tuple>(&value_)) return *v;
  throw DomainError("expected a tuple parameter, got " + to_string(*this));
}

bool operator==(const ParamValue& a, const ParamValue& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

namespace {

std::strong_ordering compare_doubles(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering operator<=>(const ParamValue& a, const ParamValue& b) {
  if (a.value_.index() != b.value_.index()) {
    return a.value_.index() <=> b.value_.index();
  }
  if (a.is_scalar()) return compare_doubles(a.scalar(), b.scalar());
  if (a.is_pair()) {
    const auto& pa = a.as_pair();
    const auto& pb = b.as_pair();
    if (auto c = compare_doubles(pa[0], pb[0]); c != 0) return c;
    return compare_doubles(pa[1], pb[1]);
  }
  if (a.is_reflection()) {
    return static_cast<int>(a.reflection()) <=> static_cast<int>(b.reflection());
  }
  const auto& ta = a.tuple();
  const auto& tb = b.tuple();
  for (std::size_t k = 0; k < ta.size() && k < tb.size(); ++k) {
    if (auto c = ta[k] <=> tb[k]; c != 0) return c;
  }
  return ta.size() <=> tb.size();
}

std::string to_string(const ParamValue& p) {
  std::ostringstream os;
  os.precision(17);
  if (p.is_scalar()) {
    os << p.scalar();
  } else if (p.is_pair()) {
    os << "(" << p.as_pair()[0] << "," << p.as_pair()[1] << ")";
  } else if (p.is_reflection()) {
    os << reflection_name(p.reflection());
  } else {
    os << "[";
    const auto& t = p.tuple();
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k) os << ",";
      os << to_string(t[k]);
    }
    os << "]";
  }
  return os.str();
}

bool Interval::contains(double v) const {
  if (!(v >= lo && v <= hi)) return false;
  return !integral || std::floor(v) == v;
}

bool space_contains(const ParamSpace& space, const ParamValue& value) {
  if (!space.parts.empty()) {
    if (!value.is_tuple() || value.tuple().size() != space.parts.size()) {
      return false;
    }
    for (std::size_t k = 0; k < space.parts.size(); ++k) {
      if (!space_contains(space.parts[k], value.tuple()[k])) return false;
    }
    return true;
  }
  if (!space.directions.empty() || value.is_reflection()) {
    if (!value.is_reflection()) return false;
    for (auto d : space.directions) {
      if (d == value.reflection()) return true;
    }
    return false;
  }
  if (space.axes.size() == 1 && value.is_scalar()) {
    return space.axes[0].contains(value.scalar());
  }
  if (space.axes.size() == 2 && value.is_pair()) {
    return space.axes[0].contains(value.as_pair()[0]) &&
           space.axes[1].contains(value.as_pair()[1]);
  }
  return false;
}

}  // namespace imverify
