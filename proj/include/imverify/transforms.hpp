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
#ifndef IMVERIFY_TRANSFORMS_HPP_
#define IMVERIFY_TRANSFORMS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imverify/image.hpp"
#include "imverify/params.hpp"

namespace imverify {

enum class TransformKind {
  kAvgSmooth,
  kMedianSmooth,
  kErosion,
  kDilation,
  kContrast,
  kBrightness,
  kOcclusion,
  kRotation,
  kShear,
  kScale,
  kTranslation,
  kReflection,
  kFog,
  kComposite,
  kPlugin,
};

enum class TransformFamily { kConvolution, kPoint, kGeometric, kOther };

std::string_view kind_name(TransformKind kind);
// Accepts the names produced by kind_name and the aliases "phi1".."phi12".
TransformKind kind_from_name(std::string_view name);
TransformFamily family(TransformKind kind);

enum class ParamArity { kScalar, kPair, kDirection, kTuple, kAny };
ParamArity arity(TransformKind kind);

struct ParamSpace;
class PluginTransform;

// A parameterized transform T(.; c). Occlusion and fog carry a mask image;
// composites carry their components in application order.
struct TransformSpec {
  TransformKind kind = TransformKind::kBrightness;
  std::optional<Image> mask;
  std::vector<TransformSpec> parts;
  std::shared_ptr<const PluginTransform> plugin;

  static TransformSpec of(TransformKind kind) {
    TransformSpec s;
    s.kind = kind;
    return s;
  }
  static TransformSpec occlusion(Image mask);
  static TransformSpec fog(Image mask);
  static TransformSpec composite(std::vector<TransformSpec> parts);
  static TransformSpec from_plugin(std::shared_ptr<const PluginTransform> p);
};

// Extension point for transforms outside the built-in catalog. A plugin must
// supply its own complete critical set; the library cannot derive one.
class PluginTransform {
 public:
  virtual ~PluginTransform() = default;
  virtual std::string name() const = 0;
  virtual Image apply(const Image& img, const ParamValue& c) const = 0;
  virtual std::vector<ParamValue> critical_values(const ParamSpace& space,
                                                  Dims dims) const = 0;
};

// T(img; c). Output has the dimensions and channel count of `img`.
Image apply(const TransformSpec& spec, const Image& img, const ParamValue& c);

// Dependent pixels of `coord` under parameter c.
//  - convolutions: the c x c window used for output `coord`, in row-major
//    window order, with out-of-image positions clamped to the border
//    (replicate padding), so the list always has c*c entries;
//  - point transforms: {coord};
//  - geometric transforms: the destination of source `coord`, or {} when it
//    falls outside the image;
//  - occlusion: {coord} outside the mask rectangle, {} inside.
std::vector<Coord> dependent_pixels(const TransformSpec& spec, Dims dims,
                                    Coord coord, const ParamValue& c);

// Dependence function: the output value computed from the values at the
// dependent pixels.
std::uint8_t dependence_function(const TransformSpec& spec,
                                 std::span<const std::uint8_t> values,
                                 const ParamValue& c);

// Fog: smooths `mask` with an average kernel of size `kernel` and blends the
// result into `img` with equal weights.
Image apply_fog(const Image& img, const Image& mask, int kernel);

// Validated integer kernel size for the convolution kinds and fog.
int kernel_size(TransformKind kind, Dims dims, const ParamValue& c);

// Integer contrast: floor(gain * v) clamped to [0, 255], with products within
// 1e-9 below an integer snapped up to it.
std::uint8_t contrast_value(double gain, std::uint8_t v);

}  // namespace imverify

#endif  // IMVERIFY_TRANSFORMS_HPP_
