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
#ifndef IMVERIFY_WIRE_HPP_
#define IMVERIFY_WIRE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imverify/image.hpp"
#include "imverify/prediction.hpp"

// Model wire protocol. One message is a JSON document; over a byte stream
// each message is framed as its decimal byte length, a newline, then the
// JSON text. Over HTTP the same document is the body of POST /predict.
//
//   request  {"requests": [{"id", "width", "height", "channels", "pixels"}]}
//   response {"responses": [{"id", "kind": "classification",
//                            "labels": [{"label", "score"?}]}
//                         | {"id", "kind": "regression", "value"}
//                         | {"id", "kind": "error", "message"}]}
//
// pixels is standard padded base64 of the row-major interleaved bytes.
// "value" is a number or an array of numbers.

namespace imverify::wire {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);

// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

nlohmann::json encode_image(const std::string& id, const Image& img);
Image decode_image(const nlohmann::json& request);

nlohmann::json encode_prediction(const std::string& id, const Prediction& p);
nlohmann::json encode_error(const std::string& id, const std::string& message);

struct Response {
  std::string id;
  std::optional<Prediction> prediction;  // empty for error responses
  std::string error;
};

Response decode_response(const nlohmann::json& item);

// Answers a request document; per-item failures become error responses.
template <typename Fn>
nlohmann::json answer(const nlohmann::json& request, Fn&& predict) {
  nlohmann::json out = nlohmann::json::array();
  if (!request.is_object() || !request.contains("requests") ||
      !request["requests"].is_array()) {
    throw ProtocolError("request document lacks a requests array");
  }
  for (const auto& item : request["requests"]) {
    std::string id;
    if (item.is_object() && item.contains("id") && item["id"].is_string()) {
      id = item["id"].get<std::string>();
    }
    try {
      out.push_back(encode_prediction(id, predict(decode_image(item))));
    } catch (const std::exception& e) {
      out.push_back(encode_error(id, e.what()));
    }
  }
  return nlohmann::json{{"responses", std::move(out)}};
}

// Framing over file descriptors. read_frame returns nullopt on clean EOF
// before a frame starts; timeout_ms < 0 waits forever.
void write_frame(int fd, std::string_view payload);
std::optional<std::string> read_frame(int fd, int timeout_ms = -1);

}  // namespace imverify::wire

#endif  // IMVERIFY_WIRE_HPP_
