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
#include "imverify/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace imverify {

namespace {

constexpr int kMeanLabels = 8;

Classification mean_ranking(int top) {
  std::vector<LabelScore> labels;
  for (int l = 0; l < kMeanLabels; ++l) {
    labels.push_back({"c" + std::to_string(l),
                      1.0 - std::abs(l - top) / static_cast<double>(kMeanLabels)});
  }
  return make_classification(std::move(labels));
}

class MeanIntensity : public Predictor {
 public:
  std::string name() const override { return "mean-intensity"; }
  Task task() const override { return Task::kClassification; }
  Prediction predict(const Image& img) const override {
    std::uint64_t sum = 0;
    for (auto v : img.pixels()) sum += v;
    const auto n = static_cast<std::uint64_t>(img.pixels().size());
    // floor(mean / 32) in integers.
    const int top = static_cast<int>(std::min<std::uint64_t>(sum / (32 * n), 7));
    return mean_ranking(top);
  }
};

class Centroid : public Predictor {
 public:
  std::string name() const override { return "centroid"; }
  Task task() const override { return Task::kRegression; }
  Prediction predict(const Image& img) const override {
    const int w = img.width();
    if (w <= 1) return make_regression(0.0);
    double mass = 0;
    double moment = 0;
    for (int j = 0; j < img.height(); ++j) {
      for (int i = 0; i < w; ++i) {
        for (int ch = 0; ch < img.channels(); ++ch) {
          const double v = img.at(i, j, ch);
          mass += v;
          moment += v * i;
        }
      }
    }
    if (mass == 0) return make_regression(0.0);
    const double half = (w - 1) / 2.0;
    return make_regression((moment / mass - half) / half);
  }
};

class Constant : public Predictor {
 public:
  std::string name() const override { return "constant"; }
  Task task() const override { return Task::kClassification; }
  Prediction predict(const Image&) const override { return mean_ranking(0); }
};

class ConstantRegression : public Predictor {
 public:
  std::string name() const override { return "constant-regression"; }
  Task task() const override { return Task::kRegression; }
  Prediction predict(const Image&) const override { return make_regression(0.0); }
};

}  // namespace

std::vector<BuiltinInfo> builtin_models() {
  return {
      {"mean-intensity", Task::kClassification,
       "8 labels c0..c7, top label c<floor(mean/32)>, score 1 - |l - top|/8"},
      {"centroid", Task::kRegression,
       "normalized x-offset of the intensity centroid in [-1, 1]"},
      {"constant", Task::kClassification, "always the ranking for label c0"},
      {"constant-regression", Task::kRegression, "always 0"},
  };
}

std::unique_ptr<Predictor> make_builtin(std::string_view name) {
  if (name == "mean-intensity") return std::make_unique<MeanIntensity>();
  if (name == "centroid") return std::make_unique<Centroid>();
  if (name == "constant") return std::make_unique<Constant>();
  if (name == "constant-regression") return std::make_unique<ConstantRegression>();
  throw DomainError("unknown builtin model: " + std::string(name));
}

}  // namespace imverify
