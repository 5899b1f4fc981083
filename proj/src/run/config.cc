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

#include "run/config.h"

#include <filesystem>
#include <set>

#include "common/error.h"
#include "common/hash.h"
#include "common/text.h"
#include "verbalize/verbalizer.h"

namespace kgwalk {

extern const char kBuiltinRelationTemplates[];

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorKind::kConfig, "config: " + message);
}

// Reads fields from one JSON object and rejects keys nobody asked for.
class Fields {
 public:
  Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) Fail(where_ + " must be an object");
  }

  bool has(const char* key) const {
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  std::string str(const char* key, std::string fallback = "") {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!obj_.at(key).is_string()) Fail(path(key) + " must be a string");
    return obj_.at(key).get<std::string>();
  }

  uint64_t uint(const char* key, uint64_t fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
      Fail(path(key) + " must be a non-negative integer");
    }
    return v.get<uint64_t>();
  }

  double real(const char* key, double fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!obj_.at(key).is_number()) Fail(path(key) + " must be a number");
    return obj_.at(key).get<double>();
  }

  bool boolean(const char* key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!obj_.at(key).is_boolean()) Fail(path(key) + " must be true or false");
    return obj_.at(key).get<bool>();
  }

  const Json* object(const char* key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    if (!obj_.at(key).is_object()) Fail(path(key) + " must be an object");
    return &obj_.at(key);
  }

  const Json* raw(const char* key) {
    seen_.insert(key);
    return has(key) ? &obj_.at(key) : nullptr;
  }

  void Done() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) Fail("unknown key " + path(key.c_str()));
    }
  }

 private:
  std::string path(const char* key) const {
    return where_.empty() ? key : where_ + "." + key;
  }

  const Json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string Resolve(const std::string& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_absolute() || base.empty()) return p;
  return (fs::path(base) / path).lexically_normal().string();
}

}  // namespace

ExperimentConfig ParseConfig(const Json& doc, const std::string& base_dir) {
  ExperimentConfig c;
  Fields top(doc, "");
  const uint64_t version = top.uint("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    Fail("unsupported schema_version " + std::to_string(version));
  }
  c.name = top.str("name");

  ExperimentSetting& s = c.setting;
  try {
    s.regime = ParseRegime(top.str("regime", "baseline"));
    s.order = ParsePromptOrder(top.str("order", "documents-then-question"));
    s.anchor_query = ParseAnchorQuery(top.str("anchor_query", "concept"));
    const std::string shape = top.str("shape");
    if (!shape.empty()) s.shape = ChainShape::Parse(shape);
  } catch (const Error& e) {
    Fail(e.what());
  }
  s.retrieved_k = top.uint("retrieved_k", 1);
  const size_t default_k =
      s.regime == Regime::kBaseline ? 0
      : !s.shape ? 1
      : s.regime == Regime::kQgi ? s.retrieved_k + s.shape->edge_count()
                                 : s.shape->edge_count();
  s.k = top.uint("k", default_k);
  const std::string relevance = top.str("relevance", "Y");
  if (relevance != "Y" && relevance != "N") Fail("relevance must be \"Y\" or \"N\"");
  s.relevant = relevance == "Y";
  const std::string direction = top.str("direction", "regular");
  if (direction == "regular") {
    s.direction = DirectionMode::kRegular;
  } else if (direction == "irregular") {
    s.direction = DirectionMode::kIrregular;
  } else {
    Fail("direction must be \"regular\" or \"irregular\"");
  }
  if (const Json* order = top.raw("irregular_order")) {
    if (!order->is_array()) Fail("irregular_order must be an array");
    for (const Json& v : *order) {
      if (!v.is_number_unsigned()) Fail("irregular_order entries must be >= 0");
      s.irregular_order.push_back(v.get<size_t>());
    }
  }
  s.max_reseeds = static_cast<uint32_t>(top.uint("max_reseeds", 8));
  c.seed = top.uint("seed", 0);
  c.dataset = top.str("dataset");
  if (c.dataset.empty()) Fail("dataset is required");

  if (const Json* g = top.object("graph")) {
    Fields f(*g, "graph");
    c.graph_dump = f.str("dump");
    c.language = f.str("language", "en");
    c.dedupe = f.boolean("dedupe", false);
    c.relation_templates = f.str("templates");
    f.Done();
  }
  if (const Json* v = top.object("vectors")) {
    Fields f(*v, "vectors");
    c.node_vectors = f.str("nodes");
    c.sentence_vectors = f.str("sentences");
    c.documents = f.str("documents");
    c.question_vectors = f.str("question");
    c.concept_vectors = f.str("concept");
    c.question_concept_vectors = f.str("question_concept");
    c.mmap = f.boolean("mmap", false);
    c.scan_threads = static_cast<unsigned>(f.uint("scan_threads", 1));
    if (c.scan_threads == 0) Fail("vectors.scan_threads must be >= 1");
    f.Done();
  }
  c.prompt_template = top.str("prompt_template");

  const Json* b = top.object("backend");
  if (b == nullptr) Fail("backend is required");
  {
    Fields f(*b, "backend");
    c.backend.kind = f.str("kind");
    if (c.backend.kind == "mock") {
      const std::string mode = f.str("mode", "constant");
      if (mode == "constant") {
        c.backend.mock_mode = MockBackend::Mode::kConstant;
      } else if (mode == "echo") {
        c.backend.mock_mode = MockBackend::Mode::kEcho;
      } else {
        Fail("backend.mode must be \"constant\" or \"echo\"");
      }
      c.backend.mock_text = f.str("text");
    } else if (c.backend.kind == "replay") {
      c.backend.replay_path = f.str("path");
      if (c.backend.replay_path.empty()) Fail("backend.path is required for replay");
    } else if (c.backend.kind == "http") {
      HttpBackendOptions& h = c.backend.http;
      h.url = f.str("url");
      if (h.url.empty()) Fail("backend.url is required for http");
      if (const Json* headers = f.object("headers")) {
        for (const auto& [k, v] : headers->items()) {
          if (!v.is_string()) Fail("backend.headers values must be strings");
          h.headers.emplace_back(k, v.get<std::string>());
        }
      }
      h.prompt_field = f.str("prompt_field", h.prompt_field);
      h.max_tokens_field = f.str("max_tokens_field", h.max_tokens_field);
      h.temperature_field = f.str("temperature_field", h.temperature_field);
      h.response_path = f.str("response_path", h.response_path);
      h.timeout_ms = static_cast<int>(f.uint("timeout_ms", h.timeout_ms));
      h.max_attempts = static_cast<int>(f.uint("max_attempts", h.max_attempts));
      h.initial_backoff_ms =
          static_cast<int>(f.uint("initial_backoff_ms", h.initial_backoff_ms));
      h.backoff_multiplier = f.real("backoff_multiplier", h.backoff_multiplier);
      if (h.max_attempts < 1) Fail("backend.max_attempts must be >= 1");
    } else {
      Fail("backend.kind must be mock, replay or http");
    }
    f.Done();
  }
  if (const Json* gen = top.object("generation")) {
    Fields f(*gen, "generation");
    c.max_new_tokens = static_cast<int>(f.uint("max_new_tokens", 32));
    c.temperature = f.real("temperature", 0.0);
    f.Done();
  }
  if (c.max_new_tokens < 1) Fail("generation.max_new_tokens must be >= 1");
  c.parallelism = top.uint("parallelism", 1);
  if (c.parallelism == 0) Fail("parallelism must be >= 1");
  c.limit = top.uint("limit", 0);
  c.output_dir = top.str("output_dir");
  top.Done();

  try {
    s.Validate();
  } catch (const Error& e) {
    Fail(e.what());
  }
  if (c.setting.regime != Regime::kBaseline &&
      c.setting.regime != Regime::kRelevantInfoOnly && c.graph_dump.empty()) {
    Fail(std::string(RegimeName(s.regime)) + " needs graph.dump");
  }

  // Normalized form, paths as written.
  nlohmann::ordered_json n;
  n["schema_version"] = kConfigSchemaVersion;
  n["name"] = c.name;
  n["regime"] = RegimeName(s.regime);
  n["k"] = s.k;
  n["retrieved_k"] = s.retrieved_k;
  n["shape"] = s.shape ? s.shape->ToString() : "";
  n["relevance"] = s.relevant ? "Y" : "N";
  n["direction"] = direction;
  n["irregular_order"] = s.irregular_order;
  n["order"] = PromptOrderName(s.order);
  n["anchor_query"] = AnchorQueryName(s.anchor_query);
  n["max_reseeds"] = s.max_reseeds;
  n["seed"] = c.seed;
  n["dataset"] = c.dataset;
  n["graph"] = {{"dump", c.graph_dump},
                {"language", c.language},
                {"dedupe", c.dedupe},
                {"templates", c.relation_templates}};
  n["vectors"] = {{"nodes", c.node_vectors},
                  {"sentences", c.sentence_vectors},
                  {"documents", c.documents},
                  {"question", c.question_vectors},
                  {"concept", c.concept_vectors},
                  {"question_concept", c.question_concept_vectors},
                  {"mmap", c.mmap}};
  n["prompt_template"] = c.prompt_template;
  nlohmann::ordered_json be;
  be["kind"] = c.backend.kind;
  if (c.backend.kind == "mock") {
    be["mode"] = c.backend.mock_mode == MockBackend::Mode::kEcho ? "echo" : "constant";
    be["text"] = c.backend.mock_text;
  } else if (c.backend.kind == "replay") {
    be["path"] = c.backend.replay_path;
  } else {
    const HttpBackendOptions& h = c.backend.http;
    be["url"] = h.url;
    nlohmann::ordered_json headers = nlohmann::ordered_json::object();
    for (const auto& [k, v] : h.headers) headers[k] = v;
    be["headers"] = headers;
    be["prompt_field"] = h.prompt_field;
    be["max_tokens_field"] = h.max_tokens_field;
    be["temperature_field"] = h.temperature_field;
    be["response_path"] = h.response_path;
    be["timeout_ms"] = h.timeout_ms;
    be["max_attempts"] = h.max_attempts;
    be["initial_backoff_ms"] = h.initial_backoff_ms;
    be["backoff_multiplier"] = h.backoff_multiplier;
  }
  n["backend"] = be;
  n["generation"] = {{"max_new_tokens", c.max_new_tokens},
                     {"temperature", c.temperature}};
  n["limit"] = c.limit;

  // Resolve paths after normalizing so the digest does not depend on where
  // the tree lives.
  c.dataset = Resolve(base_dir, c.dataset);
  c.graph_dump = Resolve(base_dir, c.graph_dump);
  c.relation_templates = Resolve(base_dir, c.relation_templates);
  c.prompt_template = Resolve(base_dir, c.prompt_template);
  c.node_vectors = Resolve(base_dir, c.node_vectors);
  c.sentence_vectors = Resolve(base_dir, c.sentence_vectors);
  c.documents = Resolve(base_dir, c.documents);
  c.question_vectors = Resolve(base_dir, c.question_vectors);
  c.concept_vectors = Resolve(base_dir, c.concept_vectors);
  c.question_concept_vectors = Resolve(base_dir, c.question_concept_vectors);
  c.backend.replay_path = Resolve(base_dir, c.backend.replay_path);
  c.output_dir = Resolve(base_dir, c.output_dir);

  std::string relation_text, prompt_text;
  try {
    relation_text = c.relation_templates.empty()
                        ? std::string(kBuiltinRelationTemplates)
                        : ReadFile(c.relation_templates);
    prompt_text = c.prompt_template.empty() ? PromptTemplate::Builtin().text()
                                            : ReadFile(c.prompt_template);
  } catch (const Error& e) {
    Fail(e.what());
  }
  c.digest = Sha256Hex(n.dump() + "\n" + Sha256Hex(relation_text) + "\n" +
                       Sha256Hex(prompt_text));
  c.normalized = std::move(n);
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) Fail(path + " is not valid JSON");
  const std::string base = fs::path(path).parent_path().string();
  return ParseConfig(doc, base);
}

std::unique_ptr<Backend> MakeBackend(const BackendConfig& config) {
  if (config.kind == "mock") {
    return std::make_unique<MockBackend>(config.mock_mode, config.mock_text);
  }
  if (config.kind == "replay") {
    return ReplayBackend::FromFile(config.replay_path);
  }
  return std::make_unique<HttpBackend>(config.http);
}

}  // namespace kgwalk
