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
#include "imverify/report.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "imverify/models.hpp"
#include "imverify/serialize.hpp"

namespace imverify {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw DomainError(what); }

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

void write_json_file(const fs::path& path, const json& doc) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) bad("cannot write " + tmp.string());
    os << doc.dump(2) << '\n';
    if (!os) bad("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

json read_json_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) bad("cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

bool is_png(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

json config_section(const RunConfig& config, const std::vector<InputImage>& inputs) {
  json in = json::array();
  for (const auto& i : inputs) {
    in.push_back({{"id", i.id}, {"file", i.path.filename().string()}});
  }
  return json{{"model", to_json(config.model)},
              {"properties", config.properties},
              {"corpus", config.corpus.string()},
              {"inputs", in}};
}

}  // namespace

ModelSpec model_from_json(const json& j) {
  ModelSpec m;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.rfind("builtin:", 0) == 0) {
      m.transport = BuiltinTransport{s.substr(8)};
    } else if (s.rfind("http://", 0) == 0) {
      m.transport = HttpTransport{s, 1};
    } else if (s.rfind("subprocess:", 0) == 0) {
      m.transport = SubprocessTransport{split_words(s.substr(11))};
    } else {
      bad("model: expected builtin:NAME, http://URL or subprocess:COMMAND");
    }
    if (const auto* b = std::get_if<BuiltinTransport>(&m.transport)) {
      m.task = make_builtin(b->name)->task();
    }
    return m;
  }
  if (!j.is_object()) bad("model: expected a string or an object");
  if (j.contains("builtin")) {
    m.transport = BuiltinTransport{j["builtin"].get<std::string>()};
  } else if (j.contains("command")) {
    const auto& c = j["command"];
    m.transport = SubprocessTransport{c.is_string() ? split_words(c.get<std::string>())
                                                    : c.get<std::vector<std::string>>()};
  } else if (j.contains("url")) {
    m.transport = HttpTransport{j["url"].get<std::string>(), j.value("max_in_flight", 1)};
  } else {
    bad("model: needs one of builtin, command, url");
  }
  if (j.contains("task")) m.task = task_from_name(j["task"].get<std::string>());
  if (const auto* b = std::get_if<BuiltinTransport>(&m.transport); b && !m.task) {
    m.task = make_builtin(b->name)->task();
  }
  m.batch_size = j.value("batch_size", m.batch_size);
  m.timeout_seconds = j.value("timeout_seconds", m.timeout_seconds);
  if (m.batch_size < 1) bad("model.batch_size must be at least 1");
  if (!(m.timeout_seconds > 0)) bad("model.timeout_seconds must be positive");
  return m;
}

json to_json(const ModelSpec& m) {
  json out{{"transport", describe(m.transport)}};
  if (m.task) out["task"] = task_name(*m.task);
  return out;
}

RunConfig run_config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) bad("run config: expected an object");
  RunConfig c;
  if (j.contains("model")) {
    c.model = model_from_json(j["model"]);
  } else if (auto t = default_transport()) {
    c.model.transport = *t;
  } else {
    bad(std::string("run config: no model given and ") + kModelUrlEnv + " is unset");
  }
  if (j.contains("batch_size")) c.model.batch_size = j["batch_size"].get<int>();
  if (c.model.batch_size < 1) bad("batch_size must be at least 1");
  if (!j.contains("properties") || !j["properties"].is_array() || j["properties"].empty()) {
    bad("run config: properties must be a nonempty array");
  }
  std::vector<std::string> names;
  for (const auto& p : j["properties"]) {
    c.properties.push_back(json_io::normalize_property(p, base_dir));
    names.push_back(c.properties.back()["name"].get<std::string>());
  }
  std::sort(names.begin(), names.end());
  if (auto d = std::adjacent_find(names.begin(), names.end()); d != names.end()) {
    bad("run config: duplicate property name " + *d + " (set \"name\")");
  }
  if (!j.contains("corpus")) bad("run config: missing corpus");
  c.corpus = fs::absolute(base_dir / j["corpus"].get<std::string>()).lexically_normal();
  c.output_dir = fs::absolute(base_dir / j.value("output_dir", std::string("imverify-out")))
                     .lexically_normal();
  if (j.contains("query_budget") && !j["query_budget"].is_null()) {
    c.query_budget = j["query_budget"].get<std::size_t>();
  }
  if (j.contains("sample") && !j["sample"].is_null()) c.sample = j["sample"].get<std::size_t>();
  c.seed = j.value("seed", std::uint64_t{0});
  c.workers = j.value("workers", 0);
  c.resume = j.value("resume", true);
  return c;
}

std::vector<InputImage> list_corpus(const fs::path& dir, std::optional<std::size_t> sample,
                                    std::uint64_t seed) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) bad("corpus is not a readable directory: " + dir.string());
  std::vector<InputImage> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_png(e.path())) {
      out.push_back({e.path().stem().string(), e.path()});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const InputImage& a, const InputImage& b) { return a.id < b.id; });
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (out[k].id == out[k - 1].id) bad("two corpus files share the id " + out[k].id);
  }
  if (sample && *sample < out.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(*sample);
    std::sort(out.begin(), out.end(),
              [](const InputImage& a, const InputImage& b) { return a.id < b.id; });
  }
  return out;
}

double PropertyAggregate::verified_percent() const {
  return inputs ? 100.0 * static_cast<double>(verified) / static_cast<double>(inputs) : 0.0;
}

double RunReport::verified_percent() const {
  return inputs.empty() ? 0.0
                        : 100.0 * static_cast<double>(inputs_verified) /
                              static_cast<double>(inputs.size());
}

RunReport aggregate(std::vector<std::string> inputs, std::vector<std::string> properties,
                    std::vector<Verdict> verdicts) {
  RunReport r;
  r.inputs = std::move(inputs);
  r.properties = std::move(properties);
  r.verdicts = std::move(verdicts);
  std::map<std::string, std::size_t> prop_index;
  for (const auto& p : r.properties) {
    prop_index.emplace(p, r.per_property.size());
    r.per_property.push_back(PropertyAggregate{p});
  }
  std::map<std::string, bool> input_ok;
  for (const auto& i : r.inputs) input_ok[i] = true;
  std::vector<double> seconds(r.per_property.size(), 0.0);
  for (const auto& v : r.verdicts) {
    auto& agg = r.per_property.at(prop_index.at(v.property));
    ++agg.inputs;
    if (v.verified()) ++agg.verified;
    agg.violations_distinct += v.violations.size();
    agg.violations_raw += v.raw_violation_count();
    seconds[prop_index.at(v.property)] += v.stats.wall_seconds;
    if (!v.verified()) input_ok.at(v.input_id) = false;
    r.violations_distinct += v.violations.size();
    r.violations_raw += v.raw_violation_count();
  }
  for (std::size_t k = 0; k < r.per_property.size(); ++k) {
    auto& agg = r.per_property[k];
    agg.mean_seconds = agg.inputs ? seconds[k] / static_cast<double>(agg.inputs) : 0.0;
  }
  for (const auto& [id, ok] : input_ok) r.inputs_verified += ok ? 1 : 0;
  return r;
}

json report_to_json(const RunReport& r) {
  json props = json::array();
  for (const auto& p : r.per_property) {
    props.push_back({{"property", p.property},
                     {"inputs", p.inputs},
                     {"verified", p.verified},
                     {"verified_percent", p.verified_percent()},
                     {"violations_distinct", p.violations_distinct},
                     {"violations_raw", p.violations_raw}});
  }
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(json_io::to_json(v, false));
  return json{{"config", r.config},
              {"summary",
               {{"inputs", r.inputs.size()},
                {"inputs_verified", r.inputs_verified},
                {"verified_percent", r.verified_percent()},
                {"violations_distinct", r.violations_distinct},
                {"violations_raw", r.violations_raw}}},
              {"properties", props},
              {"verdicts", verdicts}};
}

json timing_to_json(const RunReport& r) {
  json props = json::array();
  for (const auto& p : r.per_property) {
    props.push_back({{"property", p.property}, {"mean_seconds", p.mean_seconds}});
  }
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back(
        {{"input", v.input_id}, {"property", v.property}, {"wall_seconds", v.stats.wall_seconds}});
  }
  return json{{"properties", props}, {"verdicts", verdicts}};
}

RunReport report_from_json(const json& j) {
  std::vector<std::string> inputs;
  for (const auto& i : j.at("config").at("inputs")) inputs.push_back(i.at("id").get<std::string>());
  std::vector<std::string> props;
  for (const auto& p : j.at("config").at("properties")) {
    props.push_back(p.at("name").get<std::string>());
  }
  std::vector<Verdict> verdicts;
  for (const auto& v : j.at("verdicts")) verdicts.push_back(json_io::verdict_from_json(v));
  RunReport r = aggregate(std::move(inputs), std::move(props), std::move(verdicts));
  r.config = j.at("config");
  return r;
}

namespace {

std::string verdict_key(const std::string& input, const std::string& property) {
  return input + '\n' + property;
}

}  // namespace

int cmd_verify(const RunConfig& config, std::ostream& log) {
  const fs::path progress_path = config.output_dir / "progress.json";
  const fs::path log_path = config.output_dir / "verdicts.jsonl";
  std::map<std::string, Verdict> done;
  json key;
  std::ofstream verdict_log;
  auto save_progress = [&](const char* state) {
    write_json_file(progress_path,
                    json{{"key", key}, {"state", state}, {"completed", done.size()}});
  };
  try {
    fs::create_directories(config.output_dir);
    const auto inputs = list_corpus(config.corpus, config.sample, config.seed);
    if (inputs.empty()) bad("corpus holds no PNG files: " + config.corpus.string());
    key = config_section(config, inputs);

    std::vector<SafetyProperty> props;
    std::vector<std::string> names;
    for (const auto& p : config.properties) {
      props.push_back(json_io::property_from_json(p, config.corpus));
      names.push_back(props.back().name);
    }

    if (config.resume && fs::exists(progress_path) && fs::exists(log_path)) {
      if (read_json_file(progress_path).value("key", json()) == key) {
        std::ifstream in(log_path, std::ios::binary);
        for (std::string line; std::getline(in, line);) {
          // A torn final line from an interrupted write is dropped.
          json v = json::parse(line, nullptr, false);
          if (v.is_discarded()) break;
          auto verdict = json_io::verdict_from_json(v);
          done.emplace(verdict_key(verdict.input_id, verdict.property), std::move(verdict));
        }
        if (!done.empty()) log << "resuming with " << done.size() << " completed verdicts\n";
      } else {
        log << "ignoring progress from a different configuration\n";
      }
    }
    verdict_log.open(log_path, std::ios::binary | std::ios::trunc);
    if (!verdict_log) bad("cannot write " + log_path.string());
    for (const auto& [k, v] : done) verdict_log << json_io::to_json(v, true).dump() << '\n';
    verdict_log.flush();
    save_progress("running");

    ModelHandle model(config.model);
    model.set_query_budget(config.query_budget);
    VerifyOptions opts;
    opts.workers = config.workers;

    try {
      for (const auto& in : inputs) {
        std::optional<Image> img;
        for (const auto& prop : props) {
          const auto k = verdict_key(in.id, prop.name);
          if (done.contains(k)) continue;
          if (!img) img = read_png(in.path);
          auto verdict = verify_local(model, *img, in.id, prop, opts);
          log << in.id << " " << prop.name << ": "
              << (verdict.verified() ? "verified"
                                     : std::to_string(verdict.violations.size()) +
                                           " violating images")
              << "\n";
          verdict_log << json_io::to_json(verdict, true).dump() << '\n';
          verdict_log.flush();
          done.emplace(k, std::move(verdict));
        }
      }
    } catch (const std::exception&) {
      save_progress("interrupted");
      throw;
    }

    std::vector<Verdict> ordered;
    std::vector<std::string> ids;
    for (const auto& in : inputs) {
      ids.push_back(in.id);
      for (const auto& n : names) ordered.push_back(done.at(verdict_key(in.id, n)));
    }
    RunReport report = aggregate(std::move(ids), names, std::move(ordered));
    report.config = key;
    write_json_file(config.output_dir / "report.json", report_to_json(report));
    write_json_file(config.output_dir / "timing.json", timing_to_json(report));
    save_progress("complete");
    log << report.inputs_verified << "/" << report.inputs.size() << " inputs verified, "
        << report.violations_distinct << " violating images (" << report.violations_raw
        << " parameter values)\n";
    return report.violations_distinct == 0 ? kExitVerified : kExitViolations;
  } catch (const BudgetExhausted& e) {
    log << "error: " << e.what() << "; partial progress kept in " << progress_path << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
  }
  return kExitError;
}

EnumerateResult cmd_enumerate(const json& transform, const std::optional<json>& space,
                              Dims dims, bool dump, const fs::path& base_dir) {
  const json t = json_io::normalize_transform(transform, base_dir);
  const TransformSpec spec = json_io::transform_from_json(t, base_dir);
  ParamSpace s;
  if (space) {
    s = json_io::space_from_json(*space);
  } else {
    const json prop = json_io::normalize_property(json{{"transform", t}}, base_dir);
    s = json_io::space_from_json(prop["space"]);
  }
  EnumerateResult r;
  const auto bound = count_bound(spec, s, dims);
  r.complexity = bound.complexity;
  r.count = bound.count;
  if (dump) {
    const auto cset = critical_params(spec, s, dims);
    r.count = cset.size();
    r.values = json_io::critical_set_to_json(cset, t);
  }
  return r;
}

ExportResult cmd_export_violations(const fs::path& report_path, const fs::path& outdir) {
  const json report = read_json_file(report_path);
  const json& cfg = report.at("config");
  const fs::path corpus = cfg.at("corpus").get<std::string>();
  std::map<std::string, fs::path> files;
  for (const auto& i : cfg.at("inputs")) {
    files[i.at("id").get<std::string>()] = corpus / i.at("file").get<std::string>();
  }
  std::map<std::string, std::pair<json, TransformSpec>> props;
  for (const auto& p : cfg.at("properties")) {
    props.emplace(p.at("name").get<std::string>(),
                  std::make_pair(p, json_io::transform_from_json(p.at("transform"), corpus)));
  }
  std::size_t total = 0;
  for (const auto& v : report.at("verdicts")) total += v.at("violations").size();
  if (total == 0) bad("report contains no violations to export");

  fs::create_directories(outdir);
  ExportResult out;
  json entries = json::array();
  for (const auto& v : report.at("verdicts")) {
    if (v.at("violations").empty()) continue;
    const auto id = v.at("input").get<std::string>();
    const auto& [pdoc, spec] = props.at(v.at("property").get<std::string>());
    const Image input = read_png(files.at(id));
    for (const auto& x : v.at("violations")) {
      const ParamValue rep = json_io::param_from_json(x.at("param"));
      const Image img = apply(spec, input, rep);
      const auto digest = to_hex(image_digest(img));
      if (digest != x.at("digest").get<std::string>()) {
        bad("regenerated image for " + id + " at " + to_string(rep) +
            " does not match the recorded digest");
      }
      std::ostringstream name;
      name << std::setw(6) << std::setfill('0') << out.images << ".png";
      write_png(img, outdir / name.str());
      ++out.images;
      for (const auto& p : x.at("params")) {
        entries.push_back({{"image", name.str()},
                           {"input", id},
                           {"property", pdoc.at("name")},
                           {"transform", pdoc.at("transform")},
                           {"param", p},
                           {"digest", digest},
                           {"original", x.at("original")},
                           {"transformed", x.at("transformed")}});
        ++out.entries;
      }
    }
  }
  write_json_file(outdir / "manifest.json", json{{"entries", entries}});
  return out;
}

OracleCheckResult cmd_oracle_check(const TransformSpec& spec, const ParamSpace& space,
                                   const Image& img, double step,
                                   std::optional<std::size_t> drop_index, int workers) {
  if (img.width() * img.height() > kOracleMaxPixels) {
    bad("oracle check needs an image of at most " + std::to_string(kOracleMaxPixels) +
        " pixels (e.g. 20x20); crop or downscale the input first");
  }
  auto cset = critical_params(spec, space, img.dims(), workers);
  if (drop_index) {
    if (*drop_index >= cset.values.size()) bad("drop index beyond the critical set");
    cset.values.erase(cset.values.begin() + static_cast<std::ptrdiff_t>(*drop_index));
  }
  OracleCheckResult r;
  r.critical_values = cset.values.size();
  r.grid_points = oracle::SweepGrid(space, step, img.dims()).size();
  const auto critical = oracle::outputs_of(img, spec, cset.values, workers);
  const auto sweep = oracle::dense_sweep(img, spec, space, step, nullptr, workers);
  r.coverage = oracle::coverage_check(critical, sweep);
  return r;
}

}  // namespace imverify
