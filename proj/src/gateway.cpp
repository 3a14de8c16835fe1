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
#include "imverify/gateway.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <map>
#include <thread>

#include <httplib.h>

#include "imverify/detail/parallel.hpp"
#include "imverify/models.hpp"
#include "imverify/wire.hpp"

namespace imverify {

using nlohmann::json;

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual std::optional<Task> task() const { return std::nullopt; }
  // Number of chunks that may be in flight at once.
  virtual int slots() const { return 1; }
  virtual std::vector<Prediction> predict(std::span<const Image> chunk, int slot) = 0;
  // Called after a failed chunk, before the retry.
  virtual void reset() {}
};

namespace {

class BuiltinBackend : public ModelBackend {
 public:
  explicit BuiltinBackend(std::string_view name) : model_(make_builtin(name)) {}

  std::optional<Task> task() const override { return model_->task(); }

  std::vector<Prediction> predict(std::span<const Image> chunk, int) override {
    std::vector<Prediction> out;
    out.reserve(chunk.size());
    for (const auto& img : chunk) out.push_back(model_->predict(img));
    return out;
  }

 private:
  std::unique_ptr<Predictor> model_;
};

json make_request(std::span<const Image> chunk) {
  json items = json::array();
  for (std::size_t k = 0; k < chunk.size(); ++k) {
    items.push_back(wire::encode_image(std::to_string(k), chunk[k]));
  }
  return json{{"requests", std::move(items)}};
}

std::vector<Prediction> match_responses(const std::string& body, std::size_t n) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw wire::ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("responses") || !doc["responses"].is_array()) {
    throw wire::ProtocolError("response document lacks a responses array");
  }
  std::vector<std::optional<Prediction>> slots(n);
  for (const auto& item : doc["responses"]) {
    auto r = wire::decode_response(item);
    std::size_t pos = n;
    try {
      std::size_t used = 0;
      pos = std::stoull(r.id, &used);
      if (used != r.id.size()) pos = n;
    } catch (const std::exception&) {
      pos = n;
    }
    if (pos >= n) throw wire::ProtocolError("unknown response id: " + r.id);
    if (slots[pos]) throw wire::ProtocolError("duplicate response id: " + r.id);
    if (!r.prediction) throw wire::ProtocolError("model error for id " + r.id + ": " + r.error);
    slots[pos] = std::move(r.prediction);
  }
  std::vector<Prediction> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!slots[k]) throw wire::ProtocolError("missing response id: " + std::to_string(k));
    out.push_back(std::move(*slots[k]));
  }
  return out;
}

class SubprocessBackend : public ModelBackend {
 public:
  SubprocessBackend(std::vector<std::string> argv, double timeout_seconds)
      : argv_(std::move(argv)), timeout_ms_(static_cast<int>(timeout_seconds * 1000)) {
    if (argv_.empty()) throw DomainError("subprocess transport needs a command");
    ::signal(SIGPIPE, SIG_IGN);
    spawn();
  }

  ~SubprocessBackend() override { shutdown(); }

  std::vector<Prediction> predict(std::span<const Image> chunk, int) override {
    if (pid_ <= 0) spawn();
    try {
      wire::write_frame(to_child_, make_request(chunk).dump());
      auto reply = wire::read_frame(from_child_, timeout_ms_);
      if (!reply) throw TransportError("model process closed its output");
      return match_responses(*reply, chunk.size());
    } catch (const wire::ProtocolError& e) {
      throw TransportError(e.what());
    }
  }

  void reset() override {
    shutdown();
    spawn();
  }

 private:
  void spawn() {
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError("pipe failed");
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      throw TransportError("pipe failed");
    }
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    const pid_t pid = ::fork();
    if (pid < 0) {
      for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
      throw TransportError("fork failed");
    }
    if (pid == 0) {
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::execvp(args[0], args.data());
      ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
  }

  void shutdown() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ <= 0) return;
    int status = 0;
    for (int waited = 0; waited < 200; ++waited) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }

  std::vector<std::string> argv_;
  int timeout_ms_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
};

class HttpBackend : public ModelBackend {
 public:
  HttpBackend(const HttpTransport& t, double timeout_seconds) {
    const std::string& url = t.url;
    const auto scheme = url.find("://");
    if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
      throw DomainError("http transport needs an http:// URL: " + url);
    }
    const auto slash = url.find('/', scheme + 3);
    origin_ = url.substr(0, slash);
    path_ = slash == std::string::npos ? "/predict" : url.substr(slash);
    if (t.max_in_flight < 1) throw DomainError("max_in_flight must be at least 1");
    if (!(timeout_seconds > 0)) throw DomainError("timeout must be positive");
    const auto secs = static_cast<time_t>(timeout_seconds);
    const auto usecs = static_cast<time_t>((timeout_seconds - secs) * 1e6);
    for (int k = 0; k < t.max_in_flight; ++k) {
      auto c = std::make_unique<httplib::Client>(origin_);
      c->set_connection_timeout(secs, usecs);
      c->set_read_timeout(secs, usecs);
      c->set_write_timeout(secs, usecs);
      c->set_keep_alive(true);
      c->set_tcp_nodelay(true);
      clients_.push_back(std::move(c));
    }
  }

  int slots() const override { return static_cast<int>(clients_.size()); }

  std::vector<Prediction> predict(std::span<const Image> chunk, int slot) override {
    auto res = clients_[static_cast<std::size_t>(slot)]->Post(
        path_, make_request(chunk).dump(), "application/json");
    if (!res) {
      throw TransportError("http request to " + origin_ + path_ +
                           " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw TransportError("http status " + std::to_string(res->status) +
                           " from " + origin_ + path_);
    }
    try {
      return match_responses(res->body, chunk.size());
    } catch (const wire::ProtocolError& e) {
      throw TransportError(e.what());
    }
  }

 private:
  std::string origin_;
  std::string path_;
  std::vector<std::unique_ptr<httplib::Client>> clients_;
};

}  // namespace

std::optional<Transport> default_transport() {
  const char* url = std::getenv(kModelUrlEnv);
  if (!url || !*url) return std::nullopt;
  return HttpTransport{url, 1};
}

std::string describe(const Transport& t) {
  if (const auto* b = std::get_if<BuiltinTransport>(&t)) return "builtin:" + b->name;
  if (const auto* s = std::get_if<SubprocessTransport>(&t)) {
    std::string out = "subprocess:";
    for (std::size_t k = 0; k < s->argv.size(); ++k) {
      if (k) out += ' ';
      out += s->argv[k];
    }
    return out;
  }
  return "http:" + std::get<HttpTransport>(t).url;
}

ModelHandle::ModelHandle(ModelSpec spec) : spec_(std::move(spec)) {
  if (spec_.batch_size < 1) throw DomainError("batch_size must be at least 1");
  if (!(spec_.timeout_seconds > 0)) throw DomainError("timeout must be positive");
  if (const auto* b = std::get_if<BuiltinTransport>(&spec_.transport)) {
    backend_ = std::make_unique<BuiltinBackend>(b->name);
    if (spec_.task && *spec_.task != *backend_->task()) {
      throw DomainError("builtin model " + b->name + " is a " +
                        std::string(task_name(*backend_->task())) + " model");
    }
  } else if (const auto* s = std::get_if<SubprocessTransport>(&spec_.transport)) {
    backend_ = std::make_unique<SubprocessBackend>(s->argv, spec_.timeout_seconds);
  } else {
    backend_ = std::make_unique<HttpBackend>(std::get<HttpTransport>(spec_.transport),
                                             spec_.timeout_seconds);
  }
}

ModelHandle::~ModelHandle() = default;
ModelHandle::ModelHandle(ModelHandle&&) noexcept = default;
ModelHandle& ModelHandle::operator=(ModelHandle&&) noexcept = default;

std::optional<Task> ModelHandle::task() const {
  if (spec_.task) return spec_.task;
  if (auto t = backend_->task()) return t;
  return observed_;
}

void ModelHandle::charge(std::size_t n) {
  if (budget_ && used_ + n > *budget_) {
    throw BudgetExhausted("query budget of " + std::to_string(*budget_) +
                          " images exhausted after " + std::to_string(used_));
  }
  used_ += n;
}

std::vector<Prediction> ModelHandle::run_chunk(std::span<const Image> chunk, int slot) {
  std::string first_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      auto out = backend_->predict(chunk, slot);
      if (out.size() != chunk.size()) throw TransportError("prediction count mismatch");
      if (spec_.task) {
        for (const auto& p : out) {
          if (task_of(p) != *spec_.task) {
            throw TransportError("model answered a " + std::string(task_name(task_of(p))) +
                                 " prediction");
          }
        }
      }
      return out;
    } catch (const TransportError& e) {
      if (attempt == 1) {
        throw TransportError(std::string(e.what()) + " (after retry; first error: " +
                             first_error + ")");
      }
      first_error = e.what();
      backend_->reset();
    }
  }
  return {};
}

std::vector<Prediction> ModelHandle::predict(std::span<const Image> imgs,
                                             std::optional<int> batch_size) {
  const auto size = static_cast<std::size_t>(batch_size.value_or(spec_.batch_size));
  if (size < 1) throw DomainError("batch_size must be at least 1");
  std::vector<Prediction> out(imgs.size());
  const std::size_t chunks = (imgs.size() + size - 1) / size;
  const int slots = backend_->slots();
  for (std::size_t first = 0; first < chunks;) {
    const std::size_t wave = std::min<std::size_t>(static_cast<std::size_t>(slots),
                                                   chunks - first);
    std::size_t images = 0;
    for (std::size_t c = first; c < first + wave; ++c) {
      images += std::min(size, imgs.size() - c * size);
    }
    charge(images);
    auto run = [&](std::size_t c, int slot) {
      const std::size_t begin = c * size;
      const std::size_t n = std::min(size, imgs.size() - begin);
      auto preds = run_chunk(imgs.subspan(begin, n), slot);
      std::move(preds.begin(), preds.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
    };
    if (wave == 1) {
      run(first, 0);
    } else {
      detail::parallel_for(wave, static_cast<int>(wave),
                           [&](std::size_t b, std::size_t e, int worker) {
                             for (std::size_t c = b; c < e; ++c) {
                               run(first + c, worker);
                             }
                           });
    }
    // Without a declared task, the first answer fixes it for the handle.
    const std::size_t end = std::min(imgs.size(), (first + wave) * size);
    for (std::size_t k = first * size; k < end; ++k) {
      if (!observed_) observed_ = task_of(out[k]);
      if (task_of(out[k]) != *observed_) {
        throw TransportError("model switched from " + std::string(task_name(*observed_)) +
                             " to " + std::string(task_name(task_of(out[k]))) + " answers");
      }
    }
    first += wave;
  }
  return out;
}

std::vector<Prediction> predict_batch(ModelHandle& handle, std::span<const Image> imgs) {
  if (imgs.empty()) throw DomainError("predict_batch needs at least one image");
  const Dims d = imgs.front().dims();
  const int ch = imgs.front().channels();
  for (const auto& img : imgs) {
    if (img.dims() != d || img.channels() != ch) {
      throw DomainError("predict_batch images must share dimensions");
    }
  }
  return handle.predict(imgs);
}

double throughput_probe(ModelHandle& handle, std::span<const Image> imgs,
                        ProbeMode mode) {
  if (imgs.empty()) throw DomainError("throughput probe needs images");
  const auto start = std::chrono::steady_clock::now();
  handle.predict(imgs, mode == ProbeMode::kSingle ? std::optional<int>(1) : std::nullopt);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return static_cast<double>(imgs.size()) / std::max(dt.count(), 1e-9);
}

}  // namespace imverify
