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

#ifndef KGWALK_PROMPT_CONTEXT_H_
#define KGWALK_PROMPT_CONTEXT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embed/index.h"
#include "eval/qa_item.h"
#include "kg/graph.h"
#include "prompt/template.h"
#include "verbalize/verbalizer.h"
#include "walk/shape.h"
#include "walk/walker.h"

namespace kgwalk {

enum class Regime {
  kBaseline,
  kRelevantInfoOnly,
  kIrrelevantInfoOnly,
  kGraphInferenceOnly,
  kKgi,
  kQgi,
};

const char* RegimeName(Regime regime);
Regime ParseRegime(std::string_view name);

// Which text the anchor search embeds: the question concept alone, or the
// concept together with the question.
enum class AnchorQuery { kConcept, kConceptAndQuestion };

const char* AnchorQueryName(AnchorQuery q);
AnchorQuery ParseAnchorQuery(std::string_view name);

// One cell of the experiment grid.
struct ExperimentSetting {
  Regime regime = Regime::kBaseline;
  size_t k = 0;            // total context sentences
  size_t retrieved_k = 1;  // qgi: retrieved part of k
  PromptOrder order = PromptOrder::kDocumentsThenQuestion;
  std::optional<ChainShape> shape;
  bool relevant = true;  // graph-inference-only: R flag
  DirectionMode direction = DirectionMode::kRegular;
  std::vector<size_t> irregular_order;  // over shape path positions
  AnchorQuery anchor_query = AnchorQuery::kConcept;
  uint32_t max_reseeds = 8;

  // Throws Error(kConfig) on inconsistent settings, e.g. baseline with
  // k > 0, a graph regime without a shape, or k that does not match the
  // shape.
  void Validate() const;

  // Effective presentation permutation for chain sentences.
  std::vector<size_t> ChainPermutation() const;
  DirectionMode EffectiveDirection() const;
};

// id -> text lookup for retrieval over documents that are not graph triples.
class DocumentStore {
 public:
  // Reads "<id>\t<text>" lines (the text-export format).
  static DocumentStore Load(const std::string& path);
  const std::string* find(std::string_view id) const;
  size_t size() const { return docs_.size(); }

 private:
  std::unordered_map<std::string, std::string> docs_;
};

// Everything build_context may consult. Unused members stay null.
struct ContextResources {
  const KnowledgeGraph* graph = nullptr;
  const Verbalizer* verbalizer = nullptr;
  const EmbeddingIndex* node_vectors = nullptr;      // id = node id
  const EmbeddingIndex* sentence_vectors = nullptr;  // id = triple index
  const DocumentStore* documents = nullptr;  // texts for non-triple ids
  // Query vectors keyed by item id.
  const EmbeddingIndex* question_vectors = nullptr;
  const EmbeddingIndex* concept_vectors = nullptr;
  const EmbeddingIndex* question_concept_vectors = nullptr;
  unsigned scan_threads = 1;
};

// Throws Error(kConfig) naming the first missing resource for the regime.
void CheckResources(const ExperimentSetting& setting,
                    const ContextResources& resources);

struct ContextResult {
  std::vector<std::string> sentences;
  std::vector<std::string> sources;  // "triple:<index>" or "doc:<id>"
  std::optional<WalkChain> chain;
  bool truncated = false;
  uint32_t reseeds = 0;
  std::string note;  // why the context came up short, if it did
};

// Regime dispatch:
//   baseline              nothing
//   relevant-info-only    top-k sentences for the concept + question vector
//   irrelevant-info-only  k uniformly sampled triples
//   graph-inference-only  chain from a relevant anchor with uniformly chosen
//                         triples (R=Y) or from a random anchor (R=N)
//   kgi                   relevant anchor, first triple closest to the
//                         question, random extension
//   qgi                   relevant-info top retrieved_k, then the kgi chain
// Truncated walks are retried with up to max_reseeds derived seeds; the
// longest chain wins and a short result is flagged, never padded.
ContextResult BuildContext(const ExperimentSetting& setting, const QAItem& item,
                           const ContextResources& resources,
                           uint64_t item_seed);

}  // namespace kgwalk

#endif  // KGWALK_PROMPT_CONTEXT_H_
