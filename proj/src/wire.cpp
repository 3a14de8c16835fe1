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
#include "imverify/wire.hpp"

#include <openssl/evp.h>
#include <poll.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

namespace imverify::wire {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxFrame = std::size_t{1} << 31;

bool is_b64_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '+' || c == '/';
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ProtocolError(std::string("missing field: ") + name);
  }
  return obj[name];
}

int int_field(const json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_number_integer()) {
    throw ProtocolError(std::string("field is not an integer: ") + name);
  }
  return v.get<int>();
}

void wait_fd(int fd, short events, int timeout_ms) {
  pollfd p{fd, events, 0};
  for (;;) {
    const int r = ::poll(&p, 1, timeout_ms);
    if (r > 0) return;
    if (r == 0) throw ProtocolError("timed out waiting for model");
    if (errno != EINTR) throw ProtocolError(std::strerror(errno));
  }
}

// Reads exactly n bytes; returns false on EOF before the first byte when
// allow_eof is set.
bool read_exact(int fd, char* buf, std::size_t n, int timeout_ms, bool allow_eof) {
  std::size_t got = 0;
  while (got < n) {
    wait_fd(fd, POLLIN, timeout_ms);
    const ssize_t r = ::read(fd, buf + got, n - got);
    if (r == 0) {
      if (got == 0 && allow_eof) return false;
      throw ProtocolError("unexpected end of stream");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::strerror(errno));
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  if (bytes.empty()) return out;
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw ProtocolError("base64 length not a multiple of 4");
  std::size_t pad = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '=') {
      if (i + 2 < text.size()) throw ProtocolError("misplaced base64 padding");
      ++pad;
    } else if (pad > 0 || !is_b64_char(c)) {
      throw ProtocolError("invalid base64 character");
    }
  }
  std::vector<std::uint8_t> out(text.size() / 4 * 3);
  if (text.empty()) return out;
  const int n = EVP_DecodeBlock(out.data(),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw ProtocolError("invalid base64");
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

json encode_image(const std::string& id, const Image& img) {
  json out = json::object();
  out["id"] = id;
  out["width"] = img.width();
  out["height"] = img.height();
  out["channels"] = img.channels();
  out["pixels"] = base64_encode(img.pixels());
  return out;
}

Image decode_image(const json& request) {
  const int w = int_field(request, "width");
  const int h = int_field(request, "height");
  const int c = int_field(request, "channels");
  const auto& px = field(request, "pixels");
  if (!px.is_string()) throw ProtocolError("pixels must be a base64 string");
  auto bytes = base64_decode(px.get_ref<const std::string&>());
  try {
    return Image(w, h, c, std::move(bytes));
  } catch (const DomainError& e) {
    throw ProtocolError(e.what());
  }
}

json encode_prediction(const std::string& id, const Prediction& p) {
  // Built field by field; nested initializer lists copy every element.
  json out = json::object();
  out["id"] = id;
  if (const auto* c = std::get_if<Classification>(&p)) {
    out["kind"] = "classification";
    json labels = json::array();
    labels.get_ref<json::array_t&>().reserve(c->ranked.size());
    for (const auto& l : c->ranked) {
      json item = json::object();
      item["label"] = l.label;
      item["score"] = l.score;
      labels.push_back(std::move(item));
    }
    out["labels"] = std::move(labels);
    return out;
  }
  const auto& r = std::get<Regression>(p);
  out["kind"] = "regression";
  out["value"] = r.values.size() == 1 ? json(r.values[0]) : json(r.values);
  return out;
}

json encode_error(const std::string& id, const std::string& message) {
  return json{{"id", id}, {"kind", "error"}, {"message", message}};
}

Response decode_response(const json& item) {
  Response r;
  const auto& id = field(item, "id");
  if (!id.is_string()) throw ProtocolError("response id must be a string");
  r.id = id.get<std::string>();
  const auto& kind = field(item, "kind");
  if (!kind.is_string()) throw ProtocolError("response kind must be a string");
  const auto& k = kind.get_ref<const std::string&>();
  if (k == "error") {
    r.error = item.contains("message") && item["message"].is_string()
                  ? item["message"].get<std::string>()
                  : "model error";
    return r;
  }
  if (k == "classification") {
    const auto& labels = field(item, "labels");
    if (!labels.is_array()) throw ProtocolError("labels must be an array");
    std::vector<LabelScore> scored;
    bool any_score = false;
    bool all_scores = true;
    for (std::size_t n = 0; n < labels.size(); ++n) {
      const auto& l = labels[n];
      const auto& name = field(l, "label");
      if (!name.is_string()) throw ProtocolError("label must be a string");
      const bool has = l.contains("score") && !l["score"].is_null();
      if (has && !l["score"].is_number()) throw ProtocolError("score must be a number");
      any_score |= has;
      all_scores &= has;
      scored.push_back({name.get<std::string>(),
                        has ? l["score"].get<double>() : -static_cast<double>(n)});
    }
    if (any_score && !all_scores) {
      throw ProtocolError("scores must be given for all labels or none");
    }
    try {
      r.prediction = make_classification(std::move(scored));
    } catch (const DomainError& e) {
      throw ProtocolError(e.what());
    }
    return r;
  }
  if (k == "regression") {
    const auto& v = field(item, "value");
    Regression reg;
    if (v.is_number()) {
      reg.values.push_back(v.get<double>());
    } else if (v.is_array() && !v.empty()) {
      for (const auto& x : v) {
        if (!x.is_number()) throw ProtocolError("value entries must be numbers");
        reg.values.push_back(x.get<double>());
      }
    } else {
      throw ProtocolError("value must be a number or a nonempty array");
    }
    for (double x : reg.values) {
      if (!std::isfinite(x)) throw ProtocolError("non-finite regression value");
    }
    r.prediction = std::move(reg);
    return r;
  }
  throw ProtocolError("unknown response kind: " + k);
}

void write_frame(int fd, std::string_view payload) {
  std::string buf = std::to_string(payload.size());
  buf.push_back('\n');
  buf.append(payload);
  std::size_t sent = 0;
  while (sent < buf.size()) {
    const ssize_t w = ::write(fd, buf.data() + sent, buf.size() - sent);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("write failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(w);
  }
}

std::optional<std::string> read_frame(int fd, int timeout_ms) {
  std::string header;
  char c = 0;
  for (;;) {
    if (!read_exact(fd, &c, 1, timeout_ms, header.empty())) return std::nullopt;
    if (c == '\n') break;
    if (c < '0' || c > '9' || header.size() > 12) {
      throw ProtocolError("malformed frame header");
    }
    header.push_back(c);
  }
  if (header.empty()) throw ProtocolError("empty frame header");
  const auto n = std::stoull(header);
  if (n > kMaxFrame) throw ProtocolError("frame too large");
  std::string payload(n, '\0');
  read_exact(fd, payload.data(), n, timeout_ms, false);
  return payload;
}

}  // namespace imverify::wire
