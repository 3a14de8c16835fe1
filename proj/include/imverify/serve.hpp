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
#ifndef IMVERIFY_SERVE_HPP_
#define IMVERIFY_SERVE_HPP_

#include <memory>
#include <string>
#include <thread>

#include "imverify/models.hpp"

namespace httplib {
class Server;
}

namespace imverify {

// Serves predictor over framed stdio until EOF. Returns the process exit
// code: 0 on clean EOF, 2 on a framing or document error.
int serve_stdio(const Predictor& predictor, int in_fd, int out_fd);

// POST /predict on host:port in a background thread. Port 0 picks a free
// port.
class HttpModelServer {
 public:
  HttpModelServer(const Predictor& predictor, const std::string& host, int port);
  ~HttpModelServer();
  HttpModelServer(const HttpModelServer&) = delete;
  HttpModelServer& operator=(const HttpModelServer&) = delete;

  int port() const { return port_; }
  std::string url() const;
  void stop();

  // Blocks serving in the calling thread instead of the background one.
  static void run_blocking(const Predictor& predictor, const std::string& host,
                           int port);

 private:
  std::unique_ptr<httplib::Server> server_;
  std::string host_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace imverify

#endif  // IMVERIFY_SERVE_HPP_
