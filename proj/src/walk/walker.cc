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

#include "walk/walker.h"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "common/error.h"
#include "verbalize/verbalizer.h"

namespace kgwalk {
namespace {

NodeId ParseNodeId(std::string_view id) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), value);
  if (ec != std::errc() || ptr != id.data() + id.size() || value > UINT32_MAX) {
    throw Error(ErrorKind::kData,
                "node index id '" + std::string(id) + "' is not a node id");
  }
  return static_cast<NodeId>(value);
}

// Uniform pick among candidates satisfying `admissible`; nullopt if none.
template <typename Pred>
std::optional<TripleIndex> PickUniform(std::span<const TripleIndex> candidates,
                                       Pred admissible, Rng& rng) {
  std::vector<TripleIndex> pool;
  for (TripleIndex t : candidates) {
    if (admissible(t)) pool.push_back(t);
  }
  if (pool.empty()) return std::nullopt;
  return pool[rng.Uniform(pool.size())];
}

}  // namespace

Directions Directions::ForShape(const ChainShape& shape) {
  return Directions{shape.contains(ChainEdge::k1to2),
                    shape.contains(ChainEdge::k4to1)};
}

NodeId SelectAnchor(const EmbeddingVector& concept_query,
                    const EmbeddingIndex& node_index,
                    const KnowledgeGraph& graph, RelevanceMode mode, Rng& rng) {
  if (mode == RelevanceMode::kIrrelevantAnchor) return graph.random_node(rng);
  const Hit best = node_index.most_similar(concept_query);
  const NodeId id = ParseNodeId(best.id);
  if (id >= graph.node_count()) {
    throw Error(ErrorKind::kData, "node index id " + std::string(best.id) +
                                      " is not in the graph");
  }
  return id;
}

std::vector<TripleIndex> OneHopTriples(const KnowledgeGraph& graph,
                                       NodeId anchor, Directions directions) {
  std::vector<TripleIndex> out;
  if (directions.outbound) {
    for (TripleIndex t : graph.outbound(anchor)) {
      if (!graph.triple(t).is_self_loop()) out.push_back(t);
    }
  }
  if (directions.inbound) {
    for (TripleIndex t : graph.inbound(anchor)) {
      if (!graph.triple(t).is_self_loop()) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TripleIndex SelectFirstTriple(NodeId anchor, const EmbeddingVector& question,
                              const KnowledgeGraph& graph,
                              const EmbeddingIndex& sentence_index,
                              Directions directions) {
  const auto candidates = OneHopTriples(graph, anchor, directions);
  if (candidates.empty()) {
    throw Error(ErrorKind::kData, "stranded anchor '" +
                                      graph.node(anchor).label +
                                      "': no admissible one-hop triple");
  }
  if (candidates.size() == 1) return candidates.front();
  TripleIndex best = candidates.front();
  double best_score = -2.0;
  for (TripleIndex t : candidates) {
    const auto row = sentence_index.find(std::to_string(t));
    if (!row) {
      throw Error(ErrorKind::kData,
                  "sentence index has no vector for triple " + std::to_string(t));
    }
    const double s = sentence_index.score(*row, question);
    // Candidates ascend, so strict > keeps the lower index on ties.
    if (s > best_score) {
      best_score = s;
      best = t;
    }
  }
  return best;
}

WalkChain ExtendChain(const KnowledgeGraph& graph, NodeId anchor,
                      const ChainShape& shape, Rng& rng, RelevanceMode mode,
                      std::optional<TripleIndex> first) {
  WalkChain chain;
  chain.anchor = anchor;
  chain.seed = rng.seed();
  graph.node(anchor);  // validates

  std::optional<TripleIndex> e54, e41, e12, e23;
  std::optional<NodeId> n2, n4;

  if (mode == RelevanceMode::kRandomTriplesFromAnchor ||
      mode == RelevanceMode::kIrrelevantAnchor) {
    first.reset();
  }
  if (first) {
    const Triple& t = graph.triple(*first);
    if (t.is_self_loop()) {
      throw Error(ErrorKind::kInvalidArgument, "first triple is a self-loop");
    }
    if (t.subject == anchor) {
      if (!shape.contains(ChainEdge::k1to2)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "outbound first triple but the shape has no 1->2 edge");
      }
      e12 = *first;
      n2 = t.object;
    } else if (t.object == anchor) {
      if (!shape.contains(ChainEdge::k4to1)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "inbound first triple but the shape has no 4->1 edge");
      }
      e41 = *first;
      n4 = t.subject;
    } else {
      throw Error(ErrorKind::kInvalidArgument,
                  "first triple is not a one-hop edge of the anchor");
    }
  } else {
    const auto pool = OneHopTriples(graph, anchor, Directions::ForShape(shape));
    if (!pool.empty()) {
      const TripleIndex pick = pool[rng.Uniform(pool.size())];
      const Triple& t = graph.triple(pick);
      if (t.subject == anchor) {
        e12 = pick;
        n2 = t.object;
      } else {
        e41 = pick;
        n4 = t.subject;
      }
    }
  }

  const bool anchored = e12.has_value() || e41.has_value();
  if (anchored) {
    // Forward: 1->2 then 2->3.
    if (shape.contains(ChainEdge::k1to2) && !e12) {
      e12 = PickUniform(graph.outbound(anchor), [&](TripleIndex i) {
        const Triple& t = graph.triple(i);
        return !t.is_self_loop() && !(n4 && t.object == *n4);
      }, rng);
      if (e12) n2 = graph.triple(*e12).object;
    }
    if (shape.contains(ChainEdge::k2to3) && n2) {
      e23 = PickUniform(graph.outbound(*n2), [&](TripleIndex i) {
        const Triple& t = graph.triple(i);
        return !t.is_self_loop() && t.object != anchor;
      }, rng);
    }
    // Backward: 4->1 then 5->4.
    if (shape.contains(ChainEdge::k4to1) && !e41) {
      e41 = PickUniform(graph.inbound(anchor), [&](TripleIndex i) {
        const Triple& t = graph.triple(i);
        return !t.is_self_loop() && !(n2 && t.subject == *n2);
      }, rng);
      if (e41) n4 = graph.triple(*e41).subject;
    }
    if (shape.contains(ChainEdge::k5to4) && n4) {
      e54 = PickUniform(graph.inbound(*n4), [&](TripleIndex i) {
        const Triple& t = graph.triple(i);
        return !t.is_self_loop() && t.subject != anchor;
      }, rng);
    }
  }

  const std::pair<ChainEdge, std::optional<TripleIndex>> slots[] = {
      {ChainEdge::k5to4, e54}, {ChainEdge::k4to1, e41},
      {ChainEdge::k1to2, e12}, {ChainEdge::k2to3, e23}};
  for (const auto& [edge, triple] : slots) {
    if (shape.contains(edge) && triple) chain.steps.push_back({*triple, edge});
  }
  chain.truncated = chain.steps.size() < shape.edge_count();
  return chain;
}

std::vector<Sentence> ChainToSentences(const WalkChain& chain,
                                       const ChainShape& shape,
                                       const Verbalizer& verbalizer,
                                       DirectionMode mode,
                                       std::span<const size_t> permutation) {
  std::vector<size_t> order(shape.edge_count());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (mode == DirectionMode::kIrregular) {
    if (permutation.empty()) {
      std::reverse(order.begin(), order.end());
    } else {
      std::vector<size_t> check(permutation.begin(), permutation.end());
      std::sort(check.begin(), check.end());
      if (check != order) {
        throw Error(ErrorKind::kInvalidArgument,
                    "irregular order must be a permutation of 0.." +
                        std::to_string(order.size() - 1));
      }
      order.assign(permutation.begin(), permutation.end());
    }
  }
  std::vector<Sentence> out;
  for (size_t pos : order) {
    const ChainEdge edge = shape.edges()[pos];
    for (const ChainStep& step : chain.steps) {
      if (step.edge == edge) out.push_back(verbalizer.verbalize(step.triple));
    }
  }
  return out;
}

std::vector<TripleIndex> SampleIrrelevantTriples(const KnowledgeGraph& graph,
                                                 size_t k, Rng& rng) {
  const size_t n = graph.triple_count();
  if (k > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot sample " + std::to_string(k) + " distinct triples from " +
                    std::to_string(n));
  }
  std::vector<TripleIndex> out;
  std::unordered_set<TripleIndex> chosen;
  for (size_t j = n - k; j < n; ++j) {
    const TripleIndex t = rng.Uniform(j + 1);
    const TripleIndex pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
  // Floyd's draw order is biased toward late indices at the tail.
  for (size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[rng.Uniform(i)]);
  }
  return out;
}

}  // namespace kgwalk
