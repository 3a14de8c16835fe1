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
#ifndef IMVERIFY_MODELS_HPP_
#define IMVERIFY_MODELS_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "imverify/image.hpp"
#include "imverify/prediction.hpp"

namespace imverify {

// A model evaluated one image at a time, in-process.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual Task task() const = 0;
  virtual Prediction predict(const Image& img) const = 0;
};

struct BuiltinInfo {
  std::string name;
  Task task;
  std::string description;
};

// Deterministic toy models:
//   mean-intensity       labels c0..c7; top label c<floor(mean/32)>, label l
//                        scores 1 - |l - top|/8
//   centroid             x-offset of the intensity centroid scaled to
//                        [-1, 1]; 0 for an all-zero image or width 1
//   constant             classification, always mean-intensity's answer for 0
//   constant-regression  regression, always 0
std::vector<BuiltinInfo> builtin_models();

std::unique_ptr<Predictor> make_builtin(std::string_view name);

}  // namespace imverify

#endif  // IMVERIFY_MODELS_HPP_
