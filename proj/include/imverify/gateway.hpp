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
#ifndef IMVERIFY_GATEWAY_HPP_
#define IMVERIFY_GATEWAY_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "imverify/image.hpp"
#include "imverify/prediction.hpp"

namespace imverify {

// The model could not be reached, timed out, or answered garbage (after the
// retry).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The per-run query budget does not cover the next request.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuiltinTransport {
  std::string name;
};

// A child process speaking the framed wire protocol on stdin/stdout. It must
// exit 0 when stdin reaches EOF; any other exit is a model failure.
struct SubprocessTransport {
  std::vector<std::string> argv;
};

struct HttpTransport {
  std::string url;  // http://host:port[/path], path defaults to /predict
  int max_in_flight = 1;
};

using Transport = std::variant<BuiltinTransport, SubprocessTransport, HttpTransport>;

struct ModelSpec {
  Transport transport;
  // Expected task. Responses of the other kind are rejected when set.
  std::optional<Task> task;
  int batch_size = 64;
  double timeout_seconds = 30.0;
};

inline constexpr const char* kModelUrlEnv = "IMVERIFY_MODEL_URL";

// HttpTransport from IMVERIFY_MODEL_URL, if set.
std::optional<Transport> default_transport();

std::string describe(const Transport& t);

class ModelBackend;

class ModelHandle {
 public:
  explicit ModelHandle(ModelSpec spec);
  ~ModelHandle();
  ModelHandle(ModelHandle&&) noexcept;
  ModelHandle& operator=(ModelHandle&&) noexcept;

  const ModelSpec& spec() const { return spec_; }
  // Declared, builtin, or first observed task; nullopt before any answer
  // from a remote model with no declared task.
  std::optional<Task> task() const;

  // Budget in images; nullopt is unlimited.
  void set_query_budget(std::optional<std::size_t> images) { budget_ = images; }
  std::optional<std::size_t> query_budget() const { return budget_; }
  std::size_t queries_used() const { return used_; }

  // Splits imgs into chunks of batch_size (or the override) and retries a
  // failed chunk once. Predictions are positionally aligned with imgs.
  std::vector<Prediction> predict(std::span<const Image> imgs,
                                  std::optional<int> batch_size = std::nullopt);

 private:
  std::vector<Prediction> run_chunk(std::span<const Image> chunk, int slot);
  void charge(std::size_t n);

  ModelSpec spec_;
  std::unique_ptr<ModelBackend> backend_;
  std::optional<std::size_t> budget_;
  std::size_t used_ = 0;
  std::optional<Task> observed_;
};

std::vector<Prediction> predict_batch(ModelHandle& handle,
                                      std::span<const Image> imgs);

enum class ProbeMode { kSingle, kBatched };

// Images per second over imgs.
double throughput_probe(ModelHandle& handle, std::span<const Image> imgs,
                        ProbeMode mode);

}  // namespace imverify

#endif  // IMVERIFY_GATEWAY_HPP_
