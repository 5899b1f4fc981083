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

#ifndef KGWALK_LLM_BACKEND_H_
#define KGWALK_LLM_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace kgwalk {

struct GenRequest {
  std::string item_id;
  std::string prompt;
  int max_new_tokens = 32;
  double temperature = 0.0;  // greedy
};

struct GenResponse {
  std::string text;  // verbatim, never trimmed
  int64_t latency_ms = 0;
  std::string backend;
};

class Backend {
 public:
  virtual ~Backend() = default;

  // Throws TransientBackendError when the call failed but the run may go on
  // (the item gets flagged); any other Error is fatal for the run.
  virtual GenResponse Generate(const GenRequest& request) = 0;
  virtual std::string name() const = 0;
  // Deterministic backends report zero latency so journals are
  // byte-reproducible.
  virtual bool deterministic() const = 0;
};

// Returns a constant, or echoes the prompt.
class MockBackend : public Backend {
 public:
  enum class Mode { kConstant, kEcho };
  MockBackend(Mode mode, std::string constant)
      : mode_(mode), constant_(std::move(constant)) {}

  GenResponse Generate(const GenRequest& request) override;
  std::string name() const override { return "mock"; }
  bool deterministic() const override { return true; }

 private:
  Mode mode_;
  std::string constant_;
};

// Serves recorded responses from JSON-lines {item_id, text}. A request for
// an unrecorded item is fatal: the recording is incomplete.
class ReplayBackend : public Backend {
 public:
  static std::unique_ptr<ReplayBackend> FromFile(const std::string& path);
  static std::unique_ptr<ReplayBackend> FromJsonl(std::string_view jsonl,
                                                  const std::string& origin);

  GenResponse Generate(const GenRequest& request) override;
  std::string name() const override { return "replay"; }
  bool deterministic() const override { return true; }
  size_t size() const { return recorded_.size(); }

 private:
  std::string origin_;
  std::unordered_map<std::string, std::string> recorded_;
};

struct HttpBackendOptions {
  std::string url;  // e.g. http://127.0.0.1:8080/generate
  // Extra headers, values may reference ${ENV_VAR}.
  std::vector<std::pair<std::string, std::string>> headers;
  std::string prompt_field = "prompt";
  std::string max_tokens_field = "max_new_tokens";
  std::string temperature_field = "temperature";
  // Dot path to the generated text in the response, e.g. "choices.0.text".
  std::string response_path = "text";
  int timeout_ms = 60000;
  int max_attempts = 3;
  int initial_backoff_ms = 500;
  double backoff_multiplier = 2.0;
};

// POSTs a JSON completion request. Connection failures, timeouts, 429 and
// 5xx responses are retried with exponential backoff; after the last attempt
// (or on any other failure) the call throws TransientBackendError.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ~HttpBackend() override;

  GenResponse Generate(const GenRequest& request) override;
  std::string name() const override { return "http"; }
  bool deterministic() const override { return false; }

  // Injectable for tests.
  void set_sleep(std::function<void(std::chrono::milliseconds)> sleep) {
    sleep_ = std::move(sleep);
  }

 private:
  HttpBackendOptions options_;
  std::string host_;  // scheme://host:port
  std::string path_;
  std::function<void(std::chrono::milliseconds)> sleep_;
};

// "${NAME}" references replaced from the environment (unset -> empty).
std::string ExpandEnv(std::string_view value);

}  // namespace kgwalk

#endif  // KGWALK_LLM_BACKEND_H_
