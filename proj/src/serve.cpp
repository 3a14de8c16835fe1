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
#include "imverify/serve.hpp"

#include <httplib.h>

#include "imverify/wire.hpp"

namespace imverify {

using nlohmann::json;

namespace {

std::string answer_body(const Predictor& predictor, const std::string& body) {
  const json request = json::parse(body);
  return wire::answer(request, [&](const Image& img) { return predictor.predict(img); })
      .dump();
}

void install_routes(httplib::Server& server, const Predictor& predictor) {
  server.set_tcp_nodelay(true);
  server.Post("/predict", [&predictor](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(answer_body(predictor, req.body), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
  });
}

}  // namespace

int serve_stdio(const Predictor& predictor, int in_fd, int out_fd) {
  try {
    while (auto frame = wire::read_frame(in_fd)) {
      wire::write_frame(out_fd, answer_body(predictor, *frame));
    }
  } catch (const std::exception&) {
    return 2;
  }
  return 0;
}

HttpModelServer::HttpModelServer(const Predictor& predictor, const std::string& host,
                                 int port)
    : server_(std::make_unique<httplib::Server>()), host_(host) {
  install_routes(*server_, predictor);
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

HttpModelServer::~HttpModelServer() { stop(); }

std::string HttpModelServer::url() const {
  return "http://" + host_ + ":" + std::to_string(port_) + "/predict";
}

void HttpModelServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void HttpModelServer::run_blocking(const Predictor& predictor, const std::string& host,
                                   int port) {
  httplib::Server server;
  install_routes(server, predictor);
  if (!server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace imverify
