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

#ifndef KGWALK_WALK_WALKER_H_
#define KGWALK_WALK_WALKER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embed/index.h"
#include "kg/graph.h"
#include "walk/rng.h"
#include "walk/shape.h"

namespace kgwalk {

class Verbalizer;
struct Sentence;

enum class RelevanceMode {
  kRelevant,               // anchor = most similar node label
  kIrrelevantAnchor,       // anchor drawn uniformly from all nodes
  kRandomTriplesFromAnchor,  // relevant anchor, uniformly chosen first triple
};

enum class DirectionMode { kRegular, kIrregular };

// Which one-hop edges of the anchor may open a chain.
struct Directions {
  bool outbound = true;
  bool inbound = true;

  static Directions ForShape(const ChainShape& shape);
};

struct ChainStep {
  TripleIndex triple = 0;
  ChainEdge edge = ChainEdge::k1to2;
};

struct WalkChain {
  NodeId anchor = 0;
  std::vector<ChainStep> steps;  // path order: source end -> sink end
  bool truncated = false;
  uint64_t seed = 0;
};

// Relevant mode: the node whose label vector is closest to concept_query
// (node-index ids are node ids). Irrelevant-anchor mode: a uniform node.
NodeId SelectAnchor(const EmbeddingVector& concept_query,
                    const EmbeddingIndex& node_index,
                    const KnowledgeGraph& graph, RelevanceMode mode, Rng& rng);

// One-hop triples of the anchor in ascending triple index, self-loops
// excluded.
std::vector<TripleIndex> OneHopTriples(const KnowledgeGraph& graph,
                                       NodeId anchor, Directions directions);

// The one-hop triple whose sentence vector (sentence-index id = triple
// index) is closest to the question; ties go to the lower triple index.
// Throws Error(kData) "stranded anchor" when there are no candidates.
TripleIndex SelectFirstTriple(NodeId anchor, const EmbeddingVector& question,
                              const KnowledgeGraph& graph,
                              const EmbeddingIndex& sentence_index,
                              Directions directions = {});

// Grows a chain of the given shape around the anchor. `first` (when given,
// and unless mode is kRandomTriplesFromAnchor) occupies 1->2 if outbound or
// 4->1 if inbound; every other edge is drawn uniformly from the admissible
// edges at the current end, excluding self-loops and the edge straight back
// to the previous node. Outbound positions are filled before inbound ones.
// Dead ends leave positions empty and set `truncated`.
WalkChain ExtendChain(const KnowledgeGraph& graph, NodeId anchor,
                      const ChainShape& shape, Rng& rng, RelevanceMode mode,
                      std::optional<TripleIndex> first = std::nullopt);

// Regular: path order. Irregular: `permutation` over the shape's path
// positions (empty means reversed). Positions missing from a truncated chain
// are skipped.
std::vector<Sentence> ChainToSentences(const WalkChain& chain,
                                       const ChainShape& shape,
                                       const Verbalizer& verbalizer,
                                       DirectionMode mode,
                                       std::span<const size_t> permutation = {});

// k distinct triples drawn uniformly (Floyd's algorithm), returned in a
// uniformly shuffled order.
std::vector<TripleIndex> SampleIrrelevantTriples(const KnowledgeGraph& graph,
                                                 size_t k, Rng& rng);

}  // namespace kgwalk

#endif  // KGWALK_WALK_WALKER_H_
