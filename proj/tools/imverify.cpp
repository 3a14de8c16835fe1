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
// imverify command-line front end.

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "imverify/critical.hpp"
#include "imverify/gateway.hpp"
#include "imverify/models.hpp"
#include "imverify/report.hpp"
#include "imverify/serialize.hpp"
#include "imverify/serve.hpp"

namespace {

using nlohmann::json;
using namespace imverify;

Dims parse_dims(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw DomainError("dimensions must look like 224x224: " + s);
  }
}

// A JSON document, or a bare string treated as a JSON string.
json parse_loose(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::exception&) {
    return json(s);
  }
}

json with_mask(json transform, const std::string& mask) {
  if (mask.empty()) return transform;
  if (transform.is_string()) transform = json{{"kind", transform}};
  const Dims d = parse_dims(mask);
  transform["mask"] = json{{"width", d.width}, {"height", d.height}};
  return transform;
}

json read_file_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot read " + path);
  return json::parse(is);
}

Image random_image(Dims d, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(d.width) * d.height * channels);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng() >> 56);
  return Image(d.width, d.height, channels, std::move(px));
}

struct VerifyArgs {
  std::string config;
  std::string model;
  std::vector<std::string> properties;
  std::string corpus;
  std::string out;
  int batch_size = 0;
  long long budget = -1;
  long long sample = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  bool no_resume = false;
};

int run_verify(const VerifyArgs& a) {
  json doc = json::object();
  fs::path base = fs::current_path();
  if (!a.config.empty()) {
    doc = read_file_json(a.config);
    base = fs::absolute(a.config).parent_path();
  }
  const auto cwd_abs = [](const std::string& p) { return fs::absolute(p).string(); };
  if (!a.model.empty()) doc["model"] = parse_loose(a.model);
  if (!a.properties.empty()) {
    doc["properties"] = json::array();
    for (const auto& p : a.properties) {
      json j = parse_loose(p);
      doc["properties"].push_back(j.is_string() ? json{{"transform", j}} : j);
    }
  }
  if (!a.corpus.empty()) doc["corpus"] = cwd_abs(a.corpus);
  if (!a.out.empty()) doc["output_dir"] = cwd_abs(a.out);
  if (a.batch_size > 0) doc["batch_size"] = a.batch_size;
  if (a.budget >= 0) doc["query_budget"] = a.budget;
  if (a.sample >= 0) doc["sample"] = a.sample;
  if (a.seed_set) doc["seed"] = a.seed;
  if (a.workers >= 0) doc["workers"] = a.workers;
  if (a.no_resume) doc["resume"] = false;
  RunConfig config;
  try {
    config = run_config_from_json(doc, base);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return cmd_verify(config, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive transformation-safety verification of image models"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "verify a corpus against safety properties");
  verify->add_option("-c,--config", va.config, "run configuration JSON (flags override it)");
  verify->add_option("-m,--model", va.model,
                     "builtin:NAME, http://URL, subprocess:COMMAND or a model JSON object");
  verify->add_option("-p,--property", va.properties,
                     "property JSON or a transform name; repeatable");
  verify->add_option("--corpus", va.corpus, "directory of PNG inputs");
  verify->add_option("-o,--out", va.out, "output directory");
  verify->add_option("--batch-size", va.batch_size, "images per model request");
  verify->add_option("--budget", va.budget, "maximum number of images sent to the model");
  verify->add_option("--sample", va.sample, "verify a seeded random subset of this size");
  auto* seed_opt = verify->add_option("--seed", va.seed, "sampling seed");
  verify->add_option("-j,--workers", va.workers, "transform worker threads (0 = all cores)");
  verify->add_flag("--no-resume", va.no_resume, "ignore an existing progress file");

  std::string e_transform, e_space, e_dims = "224x224", e_mask;
  bool e_dump = false;
  auto* enumerate = app.add_subcommand("enumerate", "count the critical parameter values");
  enumerate->add_option("-t,--transform", e_transform, "transform name or JSON")->required();
  enumerate->add_option("-s,--space", e_space, "parameter space JSON (default per transform)");
  enumerate->add_option("-d,--dims", e_dims, "image dimensions WxH");
  enumerate->add_option("--mask", e_mask, "uniform black mask WxH for occlusion or fog");
  enumerate->add_flag("--dump", e_dump, "print the critical values as JSON");

  std::string x_report, x_out;
  auto* exportv = app.add_subcommand("export-violations",
                                     "write violating images and a manifest");
  exportv->add_option("-r,--report", x_report, "report.json from verify")->required();
  exportv->add_option("-o,--out", x_out, "output directory")->required();

  std::string o_transform, o_space, o_image, o_random, o_mask;
  double o_step = 1e-4;
  std::uint64_t o_seed = 0;
  long long o_drop = -1;
  auto* oracle_cmd = app.add_subcommand("oracle-check",
                                        "compare the critical set with a dense sweep");
  oracle_cmd->add_option("-t,--transform", o_transform, "transform name or JSON")->required();
  oracle_cmd->add_option("-s,--space", o_space, "parameter space JSON");
  auto* img_opt = oracle_cmd->add_option("--image", o_image, "PNG input");
  auto* rnd_opt = oracle_cmd->add_option("--random", o_random, "random grayscale image WxH");
  img_opt->excludes(rnd_opt);
  oracle_cmd->add_option("--seed", o_seed, "seed for --random");
  oracle_cmd->add_option("--step", o_step, "sweep step for real parameters");
  oracle_cmd->add_option("--mask", o_mask, "uniform black mask WxH for occlusion or fog");
  oracle_cmd->add_option("--drop-index", o_drop, "drop one critical value (fault injection)");

  std::string t_model = "builtin:mean-intensity", t_dims = "8x8", t_mode = "both";
  int t_count = 1000, t_batch = 64;
  auto* throughput = app.add_subcommand("throughput", "measure model throughput");
  throughput->add_option("-m,--model", t_model, "model");
  throughput->add_option("-n,--count", t_count, "number of images (at least 1000)");
  throughput->add_option("-d,--dims", t_dims, "image dimensions WxH");
  throughput->add_option("--batch-size", t_batch, "batch size for batched mode");
  throughput->add_option("--mode", t_mode, "single, batched or both")
      ->check(CLI::IsMember({"single", "batched", "both"}));

  std::string s_model = "mean-intensity", s_http;
  bool s_stdio = false;
  auto* serve = app.add_subcommand("serve", "serve a builtin model over the wire protocol");
  serve->add_option("-m,--model", s_model, "builtin model name");
  auto* stdio_opt = serve->add_flag("--stdio", s_stdio, "framed JSON on stdin/stdout");
  auto* http_opt = serve->add_option("--http", s_http, "HOST:PORT for POST /predict");
  stdio_opt->excludes(http_opt);

  app.add_subcommand("models", "list the builtin models");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      va.seed_set = seed_opt->count() > 0;
      return run_verify(va);
    }
    if (*enumerate) {
      std::optional<json> space;
      if (!e_space.empty()) space = json::parse(e_space);
      const auto r = cmd_enumerate(with_mask(parse_loose(e_transform), e_mask), space,
                                   parse_dims(e_dims), e_dump, fs::current_path());
      if (r.values) {
        std::cout << r.values->dump(2) << "\n";
      } else {
        std::cout << "count " << r.count << "\ncomplexity " << r.complexity << "\n";
      }
      return 0;
    }
    if (*exportv) {
      const auto r = cmd_export_violations(x_report, x_out);
      std::cout << r.images << " images, " << r.entries << " manifest entries\n";
      return 0;
    }
    if (*oracle_cmd) {
      const json t = with_mask(parse_loose(o_transform), o_mask);
      const json prop = json_io::normalize_property(
          o_space.empty() ? json{{"transform", t}}
                          : json{{"transform", t}, {"space", json::parse(o_space)}},
          fs::current_path());
      const auto spec = json_io::transform_from_json(prop["transform"], fs::current_path());
      const auto space = json_io::space_from_json(prop["space"]);
      Image img = !o_image.empty() ? read_png(o_image)
                  : !o_random.empty() ? random_image(parse_dims(o_random), 1, o_seed)
                                      : throw DomainError("give --image or --random");
      const auto r = cmd_oracle_check(
          spec, space, img, o_step,
          o_drop >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(o_drop))
                      : std::nullopt);
      std::cout << "critical values " << r.critical_values << ", grid points "
                << r.grid_points << "\n";
      for (const auto& [d, p] : r.coverage.missing) {
        std::cout << "missing " << to_hex(d) << " witness " << to_string(p) << "\n";
      }
      for (const auto& [d, p] : r.coverage.surplus) {
        std::cout << "surplus " << to_hex(d) << " witness " << to_string(p) << "\n";
      }
      std::cout << (r.passed() ? "PASS" : "FAIL") << "\n";
      return r.passed() ? 0 : 1;
    }
    if (*throughput) {
      if (t_count < 1000) throw DomainError("throughput needs at least 1000 images");
      ModelSpec spec = model_from_json(parse_loose(t_model));
      spec.batch_size = t_batch;
      ModelHandle handle(spec);
      const Dims d = parse_dims(t_dims);
      std::vector<Image> imgs;
      for (int k = 0; k < t_count; ++k) imgs.push_back(random_image(d, 1, static_cast<std::uint64_t>(k)));
      if (t_mode != "batched") {
        std::cout << "single " << throughput_probe(handle, imgs, ProbeMode::kSingle)
                  << " images/s\n";
      }
      if (t_mode != "single") {
        std::cout << "batched " << throughput_probe(handle, imgs, ProbeMode::kBatched)
                  << " images/s\n";
      }
      return 0;
    }
    if (*serve) {
      const auto model = make_builtin(s_model);
      if (!s_http.empty()) {
        const auto colon = s_http.rfind(':');
        if (colon == std::string::npos) throw DomainError("--http expects HOST:PORT");
        HttpModelServer::run_blocking(*model, s_http.substr(0, colon),
                                      std::stoi(s_http.substr(colon + 1)));
        return 0;
      }
      return serve_stdio(*model, STDIN_FILENO, STDOUT_FILENO);
    }
    for (const auto& m : builtin_models()) {
      std::cout << m.name << "\t" << task_name(m.task) << "\t" << m.description << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
