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
#ifndef IMVERIFY_VERIFIER_HPP_
#define IMVERIFY_VERIFIER_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "imverify/critical.hpp"
#include "imverify/gateway.hpp"
#include "imverify/image.hpp"
#include "imverify/params.hpp"
#include "imverify/prediction.hpp"
#include "imverify/transforms.hpp"

namespace imverify {

struct KSafe {
  std::size_t k = 1;
};

struct TSafe {
  double t = 0.1;
};

using Checker = std::variant<KSafe, TSafe>;

struct SafetyProperty {
  std::string name;  // report key
  TransformSpec transform;
  ParamSpace space;
  Checker checker = KSafe{};
  // Component of a vector regression output compared by TSafe.
  std::size_t selector = 0;
};

void validate_property(const SafetyProperty& prop);

bool holds(const Checker& checker, std::size_t selector, const Prediction& original,
           const Prediction& transformed);

struct EnumeratedOutput {
  ParamValue param;                // smallest critical value giving the image
  std::vector<ParamValue> params;  // every critical value giving the image
  Image image;
  Digest digest{};
};

// Distinct outputs of the critical set, ordered by param.
std::vector<EnumeratedOutput> enumerate_outputs(const Image& img,
                                                const TransformSpec& spec,
                                                const CriticalParamSet& cset,
                                                int workers = 0);

struct StreamOptions {
  std::size_t chunk = 256;  // critical values transformed per round
  int workers = 0;
  bool dedup = true;
};

// Streams outputs in parameter order without holding them all. on_new gets
// each round's fresh outputs (all outputs when dedup is off); on_repeat gets
// every later value whose image was already emitted.
void stream_outputs(const Image& img, const TransformSpec& spec,
                    const std::vector<ParamValue>& values, const StreamOptions& opts,
                    const std::function<void(std::vector<EnumeratedOutput>&&)>& on_new,
                    const std::function<void(const Digest&, const ParamValue&)>& on_repeat);

struct Violation {
  std::string input_id;
  ParamValue param;
  std::vector<ParamValue> params;
  Digest digest{};
  Prediction original;
  Prediction transformed;
};

enum class Status { kVerified, kViolated };

struct VerdictStats {
  std::size_t critical_values = 0;
  std::size_t outputs_enumerated = 0;
  std::size_t model_calls = 0;  // images sent, including the original
  double wall_seconds = 0.0;
};

struct Verdict {
  std::string input_id;
  std::string property;
  Status status = Status::kVerified;
  std::vector<Violation> violations;
  VerdictStats stats;

  bool verified() const { return violations.empty(); }
  // Violations counted per critical value rather than per distinct image.
  std::size_t raw_violation_count() const;
};

struct VerifyOptions {
  std::size_t batch_size = 0;  // 0 uses the model's batch size
  int workers = 0;
  bool dedup = true;
};

Verdict verify_local(ModelHandle& model, const Image& img, const std::string& input_id,
                     const SafetyProperty& prop, const VerifyOptions& opts = {});

// Same, with the critical set supplied by the caller.
Verdict verify_local(ModelHandle& model, const Image& img, const std::string& input_id,
                     const SafetyProperty& prop, const CriticalParamSet& cset,
                     const VerifyOptions& opts = {});

}  // namespace imverify

#endif  // IMVERIFY_VERIFIER_HPP_
