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
#ifndef IMVERIFY_REPORT_HPP_
#define IMVERIFY_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "imverify/gateway.hpp"
#include "imverify/oracle.hpp"
#include "imverify/verifier.hpp"

namespace imverify {

namespace fs = std::filesystem;

// Exit codes of the verify command.
inline constexpr int kExitVerified = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitError = 2;

struct RunConfig {
  ModelSpec model;
  // Normalized property documents, in report order.
  std::vector<nlohmann::json> properties;
  fs::path corpus;  // directory of PNG files; input id is the file stem
  fs::path output_dir;
  std::optional<std::size_t> query_budget;
  std::optional<std::size_t> sample;  // verify a seeded subset of the corpus
  std::uint64_t seed = 0;
  int workers = 0;
  bool resume = true;
};

// Parses a model document: {"builtin": name} | {"command": [argv...]} |
// {"url", "max_in_flight"?}, each with optional "task", "batch_size",
// "timeout_seconds". A string is shorthand: "builtin:NAME", "http://...", or
// "subprocess:CMD ARGS...".
ModelSpec model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelSpec& m);

// Run configuration document; paths resolve relative to base_dir.
//   {"model", "properties": [...], "corpus", "output_dir", "batch_size"?,
//    "query_budget"?, "sample"?, "seed"?, "workers"?}
RunConfig run_config_from_json(const nlohmann::json& j, const fs::path& base_dir);

struct InputImage {
  std::string id;
  fs::path path;
};

// PNG files of the corpus sorted by id, optionally a seeded sample of them.
std::vector<InputImage> list_corpus(const fs::path& dir, std::optional<std::size_t> sample,
                                    std::uint64_t seed);

struct PropertyAggregate {
  std::string property;
  std::size_t inputs = 0;
  std::size_t verified = 0;
  std::size_t violations_distinct = 0;
  std::size_t violations_raw = 0;
  double mean_seconds = 0.0;

  double verified_percent() const;
};

struct RunReport {
  // What was verified: model, properties, corpus and input files.
  nlohmann::json config;
  std::vector<std::string> inputs;
  std::vector<std::string> properties;
  std::vector<Verdict> verdicts;  // input order, then property order
  std::vector<PropertyAggregate> per_property;
  std::size_t inputs_verified = 0;  // inputs verified under every property
  std::size_t violations_distinct = 0;
  std::size_t violations_raw = 0;

  double verified_percent() const;
};

RunReport aggregate(std::vector<std::string> inputs, std::vector<std::string> properties,
                    std::vector<Verdict> verdicts);

// report.json content. Holds no timing, so it is byte-stable across runs.
nlohmann::json report_to_json(const RunReport& r);
// timing.json content.
nlohmann::json timing_to_json(const RunReport& r);

RunReport report_from_json(const nlohmann::json& j);

// Runs the verification, writing report.json, timing.json, progress.json and
// verdicts.jsonl to the output directory. Each finished verdict is appended
// to verdicts.jsonl; a rerun with the same configuration section skips them. Returns kExitVerified, kExitViolations or
// kExitError; errors are described on log.
int cmd_verify(const RunConfig& config, std::ostream& log);

struct EnumerateResult {
  std::size_t count = 0;
  std::string complexity;
  std::optional<nlohmann::json> values;  // the critical-set document
};

EnumerateResult cmd_enumerate(const nlohmann::json& transform,
                              const std::optional<nlohmann::json>& space, Dims dims,
                              bool dump, const fs::path& base_dir);

struct ExportResult {
  std::size_t images = 0;
  std::size_t entries = 0;
};

// Regenerates every violating image of report.json, checks its digest and
// writes <outdir>/<n>.png plus manifest.json with one entry per parameter.
ExportResult cmd_export_violations(const fs::path& report_path, const fs::path& outdir);

inline constexpr int kOracleMaxPixels = 400;

struct OracleCheckResult {
  oracle::CoverageReport coverage;
  std::size_t critical_values = 0;
  std::size_t grid_points = 0;
  bool passed() const { return coverage.complete(); }
};

// drop_index removes one critical value before comparing, for fault
// injection.
OracleCheckResult cmd_oracle_check(const TransformSpec& spec, const ParamSpace& space,
                                   const Image& img, double step,
                                   std::optional<std::size_t> drop_index = std::nullopt,
                                   int workers = 0);

}  // namespace imverify

#endif  // IMVERIFY_REPORT_HPP_
