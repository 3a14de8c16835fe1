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
#include "imverify/serialize.hpp"

#include <cmath>
#include <limits>

namespace imverify::json_io {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& what) { throw DomainError(what); }

const json& need(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    bad(std::string(where) + ": missing field \"" + key + "\"");
  }
  return j[key];
}

double number(const json& j, const char* where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  bad(std::string(where) + ": expected a number");
}

json bound(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return v;
}

json mask_to_json(const json& m, const fs::path& base_dir) {
  if (m.is_string()) return json{{"path", fs::absolute(base_dir / m.get<std::string>()).lexically_normal().string()}};
  if (m.is_object() && m.contains("path")) {
    const auto p = need(m, "path", "mask").get<std::string>();
    return json{{"path", fs::absolute(base_dir / p).lexically_normal().string()}};
  }
  if (m.is_object()) {
    json out;
    out["width"] = need(m, "width", "mask").get<int>();
    out["height"] = need(m, "height", "mask").get<int>();
    out["channels"] = m.value("channels", 1);
    out["value"] = m.value("value", 0);
    return out;
  }
  bad("mask: expected a path or {width, height, channels, value}");
}

Image mask_from_json(const json& m) {
  if (m.contains("path")) return read_png(m["path"].get<std::string>());
  const int v = m["value"].get<int>();
  if (v < 0 || v > 255) bad("mask value must lie in [0, 255]");
  return Image::filled(m["width"].get<int>(), m["height"].get<int>(),
                       m["channels"].get<int>(), static_cast<std::uint8_t>(v));
}

std::string composite_name(const json& transform) {
  if (transform["kind"] != "composite") return transform["kind"].get<std::string>();
  std::string out;
  for (const auto& p : transform["parts"]) {
    if (!out.empty()) out += "+";
    out += composite_name(p);
  }
  return out;
}

}  // namespace

json to_json(const ParamValue& p) {
  if (p.is_scalar()) return p.scalar();
  if (p.is_pair()) return json::array({p.as_pair()[0], p.as_pair()[1]});
  if (p.is_reflection()) return reflection_name(p.reflection());
  json parts = json::array();
  for (const auto& t : p.tuple()) parts.push_back(to_json(t));
  return json{{"tuple", parts}};
}

ParamValue param_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return reflection_from_name(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return ParamValue::pair(j[0].get<double>(), j[1].get<double>());
  }
  if (j.is_object() && j.contains("tuple") && j["tuple"].is_array()) {
    ParamValue::Tuple t;
    for (const auto& x : j["tuple"]) t.push_back(param_from_json(x));
    return t;
  }
  bad("parameter: expected a number, pair, direction or {\"tuple\": [...]}");
}

json to_json(const Interval& iv) {
  return json{{"lo", bound(iv.lo)}, {"hi", bound(iv.hi)}, {"integral", iv.integral}};
}

Interval interval_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) {
    return Interval{number(j[0], "interval"), number(j[1], "interval"), false};
  }
  Interval iv{number(need(j, "lo", "interval"), "interval.lo"),
              number(need(j, "hi", "interval"), "interval.hi"), false};
  if (j.contains("integral")) {
    if (!j["integral"].is_boolean()) bad("interval.integral must be a boolean");
    iv.integral = j["integral"].get<bool>();
  }
  return iv;
}

json to_json(const ParamSpace& s) {
  if (!s.parts.empty()) {
    json parts = json::array();
    for (const auto& p : s.parts) parts.push_back(to_json(p));
    return json{{"parts", parts}};
  }
  if (!s.directions.empty()) {
    json dirs = json::array();
    for (auto d : s.directions) dirs.push_back(reflection_name(d));
    return json{{"directions", dirs}};
  }
  if (s.axes.size() == 1) return to_json(s.axes[0]);
  json axes = json::array();
  for (const auto& a : s.axes) axes.push_back(to_json(a));
  return json{{"axes", axes}};
}

ParamSpace space_from_json(const json& j) {
  if (j.is_object() && j.contains("parts")) {
    ParamSpace s;
    for (const auto& p : j["parts"]) s.parts.push_back(space_from_json(p));
    return s;
  }
  if (j.is_object() && j.contains("directions")) {
    ParamSpace s;
    for (const auto& d : j["directions"]) {
      if (!d.is_string()) bad("space.directions entries must be strings");
      s.directions.push_back(reflection_from_name(d.get<std::string>()));
    }
    return s;
  }
  if (j.is_object() && j.contains("axes")) {
    ParamSpace s;
    for (const auto& a : j["axes"]) s.axes.push_back(interval_from_json(a));
    return s;
  }
  return ParamSpace{{interval_from_json(j)}, {}, {}};
}

json to_json(const Prediction& p) {
  if (const auto* c = std::get_if<Classification>(&p)) {
    json labels = json::array();
    for (const auto& l : c->ranked) labels.push_back({{"label", l.label}, {"score", l.score}});
    return json{{"kind", "classification"}, {"labels", labels}};
  }
  return json{{"kind", "regression"}, {"value", std::get<Regression>(p).values}};
}

Prediction prediction_from_json(const json& j) {
  const auto kind = need(j, "kind", "prediction").get<std::string>();
  if (kind == "classification") {
    std::vector<LabelScore> labels;
    for (const auto& l : need(j, "labels", "prediction")) {
      labels.push_back({l.at("label").get<std::string>(), l.at("score").get<double>()});
    }
    return make_classification(std::move(labels));
  }
  if (kind == "regression") {
    const auto& v = need(j, "value", "prediction");
    if (v.is_number()) return make_regression(v.get<double>());
    return Regression{v.get<std::vector<double>>()};
  }
  bad("prediction: unknown kind " + kind);
}

json normalize_transform(const json& j, const fs::path& base_dir) {
  json in = j.is_string() ? json{{"kind", j}} : j;
  if (!in.is_object()) bad("transform: expected a name or an object");
  const auto kind = kind_from_name(need(in, "kind", "transform").get<std::string>());
  json out{{"kind", kind_name(kind)}};
  switch (kind) {
    case TransformKind::kOcclusion:
    case TransformKind::kFog:
      out["mask"] = mask_to_json(need(in, "mask", "transform"), base_dir);
      break;
    case TransformKind::kComposite: {
      json parts = json::array();
      for (const auto& p : need(in, "parts", "transform")) {
        parts.push_back(normalize_transform(p, base_dir));
      }
      if (parts.size() < 2) bad("composite transform needs at least 2 parts");
      out["parts"] = parts;
      break;
    }
    case TransformKind::kPlugin:
      bad("plugin transforms are configured through the library API");
    default:
      break;
  }
  return out;
}

TransformSpec transform_from_json(const json& j, const fs::path& base_dir) {
  const json n = normalize_transform(j, base_dir);
  const auto kind = kind_from_name(n["kind"].get<std::string>());
  switch (kind) {
    case TransformKind::kOcclusion:
      return TransformSpec::occlusion(mask_from_json(n["mask"]));
    case TransformKind::kFog:
      return TransformSpec::fog(mask_from_json(n["mask"]));
    case TransformKind::kComposite: {
      std::vector<TransformSpec> parts;
      for (const auto& p : n["parts"]) parts.push_back(transform_from_json(p, base_dir));
      return TransformSpec::composite(std::move(parts));
    }
    default:
      return TransformSpec::of(kind);
  }
}

json to_json(const Checker& c) {
  if (const auto* k = std::get_if<KSafe>(&c)) return json{{"kind", "k-safe"}, {"k", k->k}};
  return json{{"kind", "t-safe"}, {"t", std::get<TSafe>(c).t}};
}

namespace {

json default_space_json(const json& transform) {
  if (transform["kind"] == "composite") {
    json parts = json::array();
    for (const auto& p : transform["parts"]) parts.push_back(default_space_json(p));
    return json{{"parts", parts}};
  }
  return to_json(default_space(kind_from_name(transform["kind"].get<std::string>())));
}

Checker checker_from_json(const json& j) {
  const auto kind = j.value("kind", std::string("k-safe"));
  if (kind == "k-safe") {
    const auto& k = j.contains("k") ? j["k"] : json(1);
    if (!k.is_number_integer() || k.get<long long>() < 1) bad("checker.k must be a positive integer");
    return KSafe{k.get<std::size_t>()};
  }
  if (kind == "t-safe") {
    const double t = j.contains("t") ? number(j["t"], "checker.t") : 0.1;
    if (!(t >= 0) || !std::isfinite(t)) bad("checker.t must be a nonnegative number");
    return TSafe{t};
  }
  bad("checker.kind must be k-safe or t-safe");
}

}  // namespace

json normalize_property(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) bad("property: expected an object");
  json transform;
  json space;
  if (j.contains("compose")) {
    if (j.contains("transform")) bad("property: give either transform or compose");
    json parts = json::array();
    json spaces = json::array();
    for (const auto& c : j["compose"]) {
      json t = normalize_transform(need(c, "transform", "compose entry"), base_dir);
      spaces.push_back(c.contains("space") ? to_json(space_from_json(c["space"]))
                                           : default_space_json(t));
      parts.push_back(std::move(t));
    }
    if (parts.size() < 2) bad("compose needs at least 2 entries");
    transform = json{{"kind", "composite"}, {"parts", parts}};
    space = json{{"parts", spaces}};
  } else {
    transform = normalize_transform(need(j, "transform", "property"), base_dir);
    space = j.contains("space") ? to_json(space_from_json(j["space"]))
                                : default_space_json(transform);
  }
  json out;
  out["name"] = j.contains("name") ? j["name"].get<std::string>() : composite_name(transform);
  out["transform"] = transform;
  out["space"] = space;
  out["checker"] = to_json(checker_from_json(j.value("checker", json::object())));
  const auto& sel = j.contains("selector") ? j["selector"] : json(0);
  if (!sel.is_number_integer() || sel.get<long long>() < 0) bad("selector must be a nonnegative integer");
  out["selector"] = sel;
  return out;
}

SafetyProperty property_from_json(const json& j, const fs::path& base_dir) {
  const json n = normalize_property(j, base_dir);
  SafetyProperty p;
  p.name = n["name"].get<std::string>();
  p.transform = transform_from_json(n["transform"], base_dir);
  p.space = space_from_json(n["space"]);
  p.checker = checker_from_json(n["checker"]);
  p.selector = n["selector"].get<std::size_t>();
  validate_property(p);
  return p;
}

json critical_set_to_json(const CriticalParamSet& cset, const json& transform) {
  json values = json::array();
  for (const auto& v : cset.values) values.push_back(to_json(v));
  return json{{"transform", transform},
              {"space", to_json(cset.space)},
              {"dims", {cset.dims.width, cset.dims.height}},
              {"count", cset.values.size()},
              {"values", values}};
}

json to_json(const Violation& v) {
  json params = json::array();
  for (const auto& p : v.params) params.push_back(to_json(p));
  return json{{"param", to_json(v.param)},
              {"params", params},
              {"digest", to_hex(v.digest)},
              {"original", to_json(v.original)},
              {"transformed", to_json(v.transformed)}};
}

json to_json(const Verdict& v, bool with_timing) {
  json violations = json::array();
  for (const auto& x : v.violations) violations.push_back(to_json(x));
  json stats{{"critical_values", v.stats.critical_values},
             {"outputs_enumerated", v.stats.outputs_enumerated},
             {"model_calls", v.stats.model_calls}};
  if (with_timing) stats["wall_seconds"] = v.stats.wall_seconds;
  return json{{"input", v.input_id},
              {"property", v.property},
              {"status", v.verified() ? "verified" : "violated"},
              {"violations_distinct", v.violations.size()},
              {"violations_raw", v.raw_violation_count()},
              {"violations", violations},
              {"stats", stats}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.input_id = need(j, "input", "verdict").get<std::string>();
  v.property = need(j, "property", "verdict").get<std::string>();
  for (const auto& x : need(j, "violations", "verdict")) {
    Violation vi;
    vi.input_id = v.input_id;
    vi.param = param_from_json(x.at("param"));
    for (const auto& p : x.at("params")) vi.params.push_back(param_from_json(p));
    vi.digest = digest_from_hex(x.at("digest").get<std::string>());
    vi.original = prediction_from_json(x.at("original"));
    vi.transformed = prediction_from_json(x.at("transformed"));
    v.violations.push_back(std::move(vi));
  }
  v.status = v.violations.empty() ? Status::kVerified : Status::kViolated;
  const auto& s = need(j, "stats", "verdict");
  v.stats.critical_values = s.at("critical_values").get<std::size_t>();
  v.stats.outputs_enumerated = s.at("outputs_enumerated").get<std::size_t>();
  v.stats.model_calls = s.at("model_calls").get<std::size_t>();
  v.stats.wall_seconds = s.value("wall_seconds", 0.0);
  return v;
}

}  // namespace imverify::json_io
