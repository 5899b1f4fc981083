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

#ifndef KGWALK_RUN_CONFIG_H_
#define KGWALK_RUN_CONFIG_H_

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"
#include "llm/backend.h"
#include "prompt/context.h"

namespace kgwalk {

inline constexpr int kConfigSchemaVersion = 1;

struct BackendConfig {
  std::string kind = "mock";  // mock | replay | http
  MockBackend::Mode mock_mode = MockBackend::Mode::kConstant;
  std::string mock_text;
  std::string replay_path;
  HttpBackendOptions http;
};

// One experiment cell, parsed from a JSON document. Relative paths resolve
// against the directory holding the config file.
struct ExperimentConfig {
  std::string name;
  ExperimentSetting setting;
  uint64_t seed = 0;
  std::string dataset;

  std::string graph_dump;
  std::string language = "en";
  bool dedupe = false;
  std::string relation_templates;  // empty: built-in
  std::string prompt_template;     // empty: built-in

  std::string node_vectors;
  std::string sentence_vectors;
  std::string documents;
  std::string question_vectors;
  std::string concept_vectors;
  std::string question_concept_vectors;
  bool mmap = false;
  unsigned scan_threads = 1;

  BackendConfig backend;
  int max_new_tokens = 32;
  double temperature = 0.0;
  size_t parallelism = 1;
  size_t limit = 0;  // 0: every item
  std::string output_dir;

  // Fully defaulted config, paths as written.
  nlohmann::ordered_json normalized;
  // SHA-256 over every behavior-affecting field plus the template texts.
  // Output location and parallelism are excluded.
  std::string digest;
};

// Throws Error(kConfig) on unknown keys, wrong types, or invalid settings.
ExperimentConfig ParseConfig(const nlohmann::json& doc,
                             const std::string& base_dir);
ExperimentConfig LoadConfig(const std::string& path);

std::unique_ptr<Backend> MakeBackend(const BackendConfig& config);

}  // namespace kgwalk

#endif  // KGWALK_RUN_CONFIG_H_
