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
#ifndef IMVERIFY_PREDICTION_HPP_
#define IMVERIFY_PREDICTION_HPP_

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "imverify/image.hpp"

namespace imverify {

enum class Task { kClassification, kRegression };

std::string_view task_name(Task task);
Task task_from_name(std::string_view name);

struct LabelScore {
  std::string label;
  double score = 0.0;

  bool operator==(const LabelScore&) const = default;
};

// Ranked by score descending, ties by label ascending.
struct Classification {
  std::vector<LabelScore> ranked;

  bool operator==(const Classification&) const = default;
};

struct Regression {
  std::vector<double> values;

  bool operator==(const Regression&) const = default;
};

using Prediction = std::variant<Classification, Regression>;

// Sorts into canonical rank order. Throws DomainError on duplicate labels.
Classification make_classification(std::vector<LabelScore> labels);

// Labels given in rank order without scores; rank r gets score -r.
Classification classification_from_ranking(const std::vector<std::string>& labels);

Regression make_regression(double value);

Task task_of(const Prediction& p);

// Top-k labels. Fewer than k labels means all of them.
std::vector<std::string> top_k(const Classification& c, std::size_t k);

// Throws DomainError for regression predictions or an empty ranking.
bool check_k_safe(const Prediction& original, const Prediction& transformed,
                  std::size_t k);

// Compares component `selector` of two regression outputs.
bool check_t_safe(const Prediction& original, const Prediction& transformed,
                  double t, std::size_t selector = 0);

std::string to_string(const Prediction& p);

}  // namespace imverify

#endif  // IMVERIFY_PREDICTION_HPP_
