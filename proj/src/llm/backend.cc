// Copyright 2026 The kgwalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llm/backend.h"

#include <cstdlib>
#include <thread>

#include "common/error.h"
#include "common/text.h"
#include "httplib.h"
#include "json.hpp"

namespace kgwalk {

GenResponse MockBackend::Generate(const GenRequest& request) {
  return GenResponse{mode_ == Mode::kEcho ? request.prompt : constant_, 0,
                     name()};
}

std::unique_ptr<ReplayBackend> ReplayBackend::FromFile(const std::string& path) {
  return FromJsonl(ReadFile(path), path);
}

std::unique_ptr<ReplayBackend> ReplayBackend::FromJsonl(
    std::string_view jsonl, const std::string& origin) {
  auto backend = std::make_unique<ReplayBackend>();
  backend->origin_ = origin;
  int line_no = 0;
  for (std::string_view line : Split(jsonl, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("item_id") ||
        !j["item_id"].is_string() || !j.contains("text") ||
        !j["text"].is_string()) {
      throw Error(ErrorKind::kData, where + "expected {item_id, text}");
    }
    if (!backend->recorded_
             .emplace(j["item_id"].get<std::string>(),
                      j["text"].get<std::string>())
             .second) {
      throw Error(ErrorKind::kData,
                  where + "duplicate item_id " + j["item_id"].get<std::string>());
    }
  }
  return backend;
}

GenResponse ReplayBackend::Generate(const GenRequest& request) {
  auto it = recorded_.find(request.item_id);
  if (it == recorded_.end()) {
    throw Error(ErrorKind::kBackend, "replay miss: item " + request.item_id +
                                         " is not in " + origin_ +
                                         " (recording incomplete)");
  }
  return GenResponse{it->second, 0, name()};
}

std::string ExpandEnv(std::string_view value) {
  std::string out;
  size_t i = 0;
  while (i < value.size()) {
    if (value.substr(i, 2) == "${") {
      const size_t close = value.find('}', i + 2);
      if (close != std::string_view::npos) {
        const std::string var(value.substr(i + 2, close - i - 2));
        if (const char* v = std::getenv(var.c_str())) out += v;
        i = close + 1;
        continue;
      }
    }
    out.push_back(value[i++]);
  }
  return out;
}

namespace {

const nlohmann::json* FollowPath(const nlohmann::json& root,
                                 std::string_view path) {
  const nlohmann::json* cur = &root;
  for (std::string_view part : Split(path, '.')) {
    if (cur->is_object()) {
      auto it = cur->find(std::string(part));
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else if (cur->is_array()) {
      size_t idx = 0;
      for (char c : part) {
        if (c < '0' || c > '9') return nullptr;
        idx = idx * 10 + static_cast<size_t>(c - '0');
      }
      if (part.empty() || idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else {
      return nullptr;
    }
  }
  return cur;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  const std::string& url = options_.url;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kConfig, "backend url must start with http:// or "
                                    "https://: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorKind::kConfig, "unsupported url scheme: " + scheme);
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (options_.max_attempts < 1) {
    throw Error(ErrorKind::kConfig, "max_attempts must be >= 1");
  }
}

HttpBackend::~HttpBackend() = default;

GenResponse HttpBackend::Generate(const GenRequest& request) {
  nlohmann::json body;
  body[options_.prompt_field] = request.prompt;
  body[options_.max_tokens_field] = request.max_new_tokens;
  body[options_.temperature_field] = request.temperature;
  const std::string payload = body.dump();

  httplib::Headers headers;
  for (const auto& [k, v] : options_.headers) headers.emplace(k, ExpandEnv(v));

  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  auto backoff = std::chrono::milliseconds(options_.initial_backoff_ms);
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    httplib::Client client(host_);
    const auto timeout = std::chrono::milliseconds(options_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(path_, headers, payload, "application/json");
    bool retryable = true;
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP " + std::to_string(res->status);
      retryable = false;
    } else {
      nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
      const nlohmann::json* text =
          j.is_discarded() ? nullptr : FollowPath(j, options_.response_path);
      if (text == nullptr || !text->is_string()) {
        throw TransientBackendError("item " + request.item_id +
                                    ": response has no string at '" +
                                    options_.response_path + "'");
      }
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      return GenResponse{text->get<std::string>(), elapsed.count(), name()};
    }
    if (!retryable || attempt == options_.max_attempts) break;
    sleep_(backoff);
    backoff = std::chrono::milliseconds(static_cast<int64_t>(
        static_cast<double>(backoff.count()) * options_.backoff_multiplier));
  }
  throw TransientBackendError("item " + request.item_id + ": " + last_error);
}

}  // namespace kgwalk
