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
#ifndef IMVERIFY_SERIALIZE_HPP_
#define IMVERIFY_SERIALIZE_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "imverify/critical.hpp"
#include "imverify/params.hpp"
#include "imverify/prediction.hpp"
#include "imverify/transforms.hpp"
#include "imverify/verifier.hpp"

// JSON forms of the domain types. docs/formats.md describes each schema.
// Parsers throw DomainError with the offending field named.

namespace imverify::json_io {

using nlohmann::json;

json to_json(const ParamValue& p);
ParamValue param_from_json(const json& j);

json to_json(const Interval& iv);
Interval interval_from_json(const json& j);

json to_json(const ParamSpace& s);
ParamSpace space_from_json(const json& j);

json to_json(const Prediction& p);
Prediction prediction_from_json(const json& j);

// Transform specs are read from their JSON form; masks resolve relative to
// base_dir. normalize_transform rewrites the document into its canonical
// form (object with kind, absolute mask paths) so it can be stored and
// parsed again later.
TransformSpec transform_from_json(const json& j, const std::filesystem::path& base_dir);
json normalize_transform(const json& j, const std::filesystem::path& base_dir);

// Property document:
//   {"name"?, "transform", "space"?, "checker"?: {"kind": "k-safe", "k"}
//    | {"kind": "t-safe", "t"}, "selector"?, "compose"?: [{"transform",
//    "space"?}, ...]}
// A missing space is the transform's default; the checker defaults to k = 1
// or t = 0.1. normalize_property fills every default.
json normalize_property(const json& j, const std::filesystem::path& base_dir);
SafetyProperty property_from_json(const json& j, const std::filesystem::path& base_dir);

json to_json(const Checker& c);

json critical_set_to_json(const CriticalParamSet& cset, const json& transform);

// Verdicts. Wall time is written only when with_timing is set.
json to_json(const Violation& v);
json to_json(const Verdict& v, bool with_timing);
Verdict verdict_from_json(const json& j);

}  // namespace imverify::json_io

#endif  // IMVERIFY_SERIALIZE_HPP_
