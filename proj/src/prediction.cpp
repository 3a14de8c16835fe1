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
#include "imverify/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace imverify {

std::string_view task_name(Task task) {
  return task == Task::kClassification ? "classification" : "regression";
}

Task task_from_name(std::string_view name) {
  if (name == "classification") return Task::kClassification;
  if (name == "regression") return Task::kRegression;
  throw DomainError("unknown task: " + std::string(name));
}

Classification make_classification(std::vector<LabelScore> labels) {
  std::sort(labels.begin(), labels.end(),
            [](const LabelScore& a, const LabelScore& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.label < b.label;
            });
  std::vector<std::string> names;
  names.reserve(labels.size());
  for (const auto& l : labels) names.push_back(l.label);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw DomainError("duplicate label in classification");
  }
  for (const auto& l : labels) {
    if (!std::isfinite(l.score)) throw DomainError("non-finite label score");
  }
  return Classification{std::move(labels)};
}

Classification classification_from_ranking(const std::vector<std::string>& labels) {
  std::vector<LabelScore> scored;
  scored.reserve(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    scored.push_back({labels[r], -static_cast<double>(r)});
  }
  return make_classification(std::move(scored));
}

Regression make_regression(double value) { return Regression{{value}}; }

Task task_of(const Prediction& p) {
  return std::holds_alternative<Classification>(p) ? Task::kClassification
                                                   : Task::kRegression;
}

std::vector<std::string> top_k(const Classification& c, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.ranked.size() && i < k; ++i) {
    out.push_back(c.ranked[i].label);
  }
  return out;
}

bool check_k_safe(const Prediction& original, const Prediction& transformed,
                  std::size_t k) {
  const auto* o = std::get_if<Classification>(&original);
  const auto* t = std::get_if<Classification>(&transformed);
  if (!o || !t) throw DomainError("k-safety needs classification predictions");
  if (k < 1) throw DomainError("k must be at least 1");
  if (t->ranked.empty()) throw DomainError("transformed prediction has no labels");
  const auto& top1 = t->ranked.front().label;
  const auto allowed = top_k(*o, k);
  return std::find(allowed.begin(), allowed.end(), top1) != allowed.end();
}

bool check_t_safe(const Prediction& original, const Prediction& transformed,
                  double t, std::size_t selector) {
  const auto* o = std::get_if<Regression>(&original);
  const auto* r = std::get_if<Regression>(&transformed);
  if (!o || !r) throw DomainError("t-safety needs regression predictions");
  if (!(t >= 0)) throw DomainError("t must be nonnegative");
  if (selector >= o->values.size() || selector >= r->values.size()) {
    throw DomainError("regression selector out of range");
  }
  return std::abs(r->values[selector] - o->values[selector]) <= t;
}

std::string to_string(const Prediction& p) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* c = std::get_if<Classification>(&p)) {
    os << "[";
    for (std::size_t i = 0; i < c->ranked.size(); ++i) {
      if (i) os << ", ";
      os << c->ranked[i].label << ":" << c->ranked[i].score;
    }
    os << "]";
  } else {
    const auto& r = std::get<Regression>(p);
    os << "(";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      if (i) os << ", ";
      os << r.values[i];
    }
    os << ")";
  }
  return os.str();
}

}  // namespace imverify
