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

#ifndef KGWALK_KG_GRAPH_H_
#define KGWALK_KG_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgwalk {

class Rng;

using NodeId = uint32_t;
using RelationId = uint16_t;
using TripleIndex = uint64_t;

struct Node {
  NodeId id = 0;
  std::string label;  // lowercase, underscores replaced by spaces
  std::string uri;    // e.g. "/c/en/alcohol"
};

struct Relation {
  RelationId id = 0;
  std::string name;  // e.g. "Causes", "dbpedia/genre"
};

struct Triple {
  NodeId subject = 0;
  RelationId relation = 0;
  NodeId object = 0;
  double weight = 1.0;

  bool is_self_loop() const { return subject == object; }
};

// Normalizes a ConceptNet term or free-text concept into a node label.
std::string NormalizeLabel(std::string_view text);

// Directed, relation-typed multigraph. Immutable once built; concurrent
// readers need no synchronization.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  size_t node_count() const { return nodes_.size(); }
  size_t triple_count() const { return triples_.size(); }
  size_t relation_count() const { return relations_.size(); }
  bool empty() const { return nodes_.empty(); }

  const Node& node(NodeId id) const;
  const Relation& relation(RelationId id) const;
  const Triple& triple(TripleIndex index) const;
  std::span<const Triple> triples() const { return triples_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Relation> relations() const { return relations_; }

  // Triple indices with subject == node, in ingestion order.
  std::span<const TripleIndex> outbound(NodeId node) const;
  // Triple indices with object == node, in ingestion order.
  std::span<const TripleIndex> inbound(NodeId node) const;

  // Exact match after normalization. Empty or unknown labels yield nullopt.
  std::optional<NodeId> node_by_label(std::string_view label) const;
  std::optional<RelationId> relation_by_name(std::string_view name) const;

  // Uniform over nodes. Throws on an empty graph.
  NodeId random_node(Rng& rng) const;

 private:
  friend class GraphBuilder;

  std::vector<Node> nodes_;
  std::vector<Relation> relations_;
  std::vector<Triple> triples_;
  // CSR adjacency: entries for node n live in [offsets[n], offsets[n+1]).
  std::vector<size_t> out_offsets_;
  std::vector<TripleIndex> out_entries_;
  std::vector<size_t> in_offsets_;
  std::vector<TripleIndex> in_entries_;
  std::unordered_map<std::string, NodeId> label_index_;
  std::unordered_map<std::string, RelationId> relation_index_;
};

// Single-writer construction. Node and relation ids are handed out in
// first-seen order.
class GraphBuilder {
 public:
  NodeId intern_node(std::string_view label, std::string_view uri);
  RelationId intern_relation(std::string_view name);

  // Returns false (and adds nothing) when dedupe is on and the same
  // subject/relation/object has already been added.
  bool add_triple(NodeId subject, RelationId relation, NodeId object,
                  double weight);

  // Convenience for tests and fixtures: labels double as URIs.
  TripleIndex add(std::string_view subject, std::string_view relation,
                  std::string_view object, double weight = 1.0);

  void set_dedupe(bool on) { dedupe_ = on; }
  size_t triple_count() const { return graph_.triples_.size(); }

  KnowledgeGraph Build() &&;

 private:
  KnowledgeGraph graph_;
  bool dedupe_ = false;
  std::unordered_map<std::string, bool> seen_;
};

}  // namespace kgwalk

#endif  // KGWALK_KG_GRAPH_H_
