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

#ifndef KGWALK_KG_CONCEPTNET_H_
#define KGWALK_KG_CONCEPTNET_H_

#include <cstdint>
#include <string>

#include "kg/graph.h"

namespace kgwalk {

struct IngestOptions {
  std::string language = "en";
  bool dedupe = false;
};

struct IngestReport {
  uint64_t lines = 0;
  uint64_t nodes = 0;
  uint64_t triples = 0;
  uint64_t skipped = 0;     // malformed lines
  uint64_t filtered = 0;    // well-formed, other language or non-concept end
  uint64_t duplicates = 0;  // dropped by dedupe
  uint64_t relations = 0;
};

struct IngestResult {
  KnowledgeGraph graph;
  IngestReport report;
};

// Reads a ConceptNet 5 assertions dump (tab-separated: assertion URI,
// relation URI, start URI, end URI, JSON metadata). Files ending in ".gz" are
// decompressed on the fly.
//
// Only assertions whose start and end are both /c/<language>/... concepts are
// kept. Concepts collapse to their term: /c/en/alcohol/n and /c/en/alcohol are
// the same node. Malformed lines are counted and skipped. Throws Error(kIo)
// when the file cannot be read and Error(kData) when nothing survives.
IngestResult IngestConceptNet(const std::string& path,
                              const IngestOptions& options);

// Line-level parse exposed for tests.
struct ParsedAssertion {
  std::string relation;       // "Causes"
  std::string start_term;     // "alcohol"
  std::string end_term;
  std::string start_uri;      // "/c/en/alcohol"
  std::string end_uri;
  double weight = 1.0;
};

enum class LineStatus { kOk, kMalformed, kFiltered };

LineStatus ParseAssertionLine(std::string_view line, std::string_view language,
                              ParsedAssertion* out);

}  // namespace kgwalk

#endif  // KGWALK_KG_CONCEPTNET_H_
