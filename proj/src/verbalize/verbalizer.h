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

#ifndef KGWALK_VERBALIZE_VERBALIZER_H_
#define KGWALK_VERBALIZE_VERBALIZER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kg/graph.h"

namespace kgwalk {

struct RelationTemplate {
  std::string name;
  std::string text;  // e.g. "SUBJ causes OBJ"
  bool symmetric = false;
};

// Per-relation sentence templates. Loaded from a TSV file
// (name \t template \t symmetric-flag, '#' comments) or from the built-in
// copy of data/relation_templates.tsv.
class TemplateTable {
 public:
  static TemplateTable Builtin();
  static TemplateTable FromFile(const std::string& path);
  static TemplateTable Parse(std::string_view tsv);

  const RelationTemplate* find(std::string_view relation) const;
  size_t size() const { return templates_.size(); }
  const std::vector<RelationTemplate>& entries() const { return templates_; }

 private:
  std::vector<RelationTemplate> templates_;
  std::unordered_map<std::string, size_t> by_name_;
};

struct Sentence {
  std::string text;
  TripleIndex source_triple = 0;
};

// Renders triples as lowercase sentences without a trailing period. The
// subject always fills SUBJ and the object always fills OBJ, symmetric
// relations included.
class Verbalizer {
 public:
  Verbalizer(const KnowledgeGraph& graph, TemplateTable templates);

  // Throws Error(kData) naming the relation when it has no template.
  Sentence verbalize(TripleIndex index) const;
  std::string render(const Triple& triple) const;

  // Calls sink once per triple, in triple-index order. Errors carry the
  // failing triple index.
  void verbalize_corpus(
      const std::function<void(const Sentence&)>& sink) const;

  // Writes "<triple_index>\t<sentence>\n" lines; returns the line count.
  uint64_t export_sentences(const std::string& path) const;

  const KnowledgeGraph& graph() const { return *graph_; }

 private:
  struct Compiled {
    bool present = false;
    std::vector<std::string> pieces;  // literal text between slots
    std::vector<bool> slot_is_subject;
  };

  const KnowledgeGraph* graph_;
  TemplateTable templates_;
  std::vector<Compiled> compiled_;  // indexed by RelationId
};

// Writes "<node_id>\t<label>\n" lines for the embedder's node-label input.
uint64_t ExportNodeLabels(const KnowledgeGraph& graph, const std::string& path);

}  // namespace kgwalk

#endif  // KGWALK_VERBALIZE_VERBALIZER_H_
