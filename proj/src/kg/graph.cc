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

#include "kg/graph.h"

#include "common/error.h"
#include "common/text.h"
#include "walk/rng.h"

namespace kgwalk {

std::string NormalizeLabel(std::string_view text) {
  std::string out = AsciiLower(Trim(text));
  for (char& c : out) {
    if (c == '_') c = ' ';
  }
  return out;
}

const Node& KnowledgeGraph::node(NodeId id) const {
  if (id >= nodes_.size()) {
    throw Error(ErrorKind::kNotFound, "unknown node id " + std::to_string(id));
  }
  return nodes_[id];
}

const Relation& KnowledgeGraph::relation(RelationId id) const {
  if (id >= relations_.size()) {
    throw Error(ErrorKind::kNotFound,
                "unknown relation id " + std::to_string(id));
  }
  return relations_[id];
}

const Triple& KnowledgeGraph::triple(TripleIndex index) const {
  if (index >= triples_.size()) {
    throw Error(ErrorKind::kNotFound,
                "unknown triple index " + std::to_string(index));
  }
  return triples_[index];
}

std::span<const TripleIndex> KnowledgeGraph::outbound(NodeId node) const {
  if (node >= nodes_.size()) {
    throw Error(ErrorKind::kNotFound, "unknown node id " + std::to_string(node));
  }
  return std::span<const TripleIndex>(out_entries_)
      .subspan(out_offsets_[node], out_offsets_[node + 1] - out_offsets_[node]);
}

std::span<const TripleIndex> KnowledgeGraph::inbound(NodeId node) const {
  if (node >= nodes_.size()) {
    throw Error(ErrorKind::kNotFound, "unknown node id " + std::to_string(node));
  }
  return std::span<const TripleIndex>(in_entries_)
      .subspan(in_offsets_[node], in_offsets_[node + 1] - in_offsets_[node]);
}

std::optional<NodeId> KnowledgeGraph::node_by_label(
    std::string_view label) const {
  const std::string key = NormalizeLabel(label);
  if (key.empty()) return std::nullopt;
  auto it = label_index_.find(key);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> KnowledgeGraph::relation_by_name(
    std::string_view name) const {
  auto it = relation_index_.find(std::string(name));
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

NodeId KnowledgeGraph::random_node(Rng& rng) const {
  if (nodes_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "random_node on an empty graph");
  }
  return static_cast<NodeId>(rng.Uniform(nodes_.size()));
}

NodeId GraphBuilder::intern_node(std::string_view label, std::string_view uri) {
  std::string key = NormalizeLabel(label);
  if (key.empty()) throw Error(ErrorKind::kData, "empty node label");
  auto it = graph_.label_index_.find(key);
  if (it != graph_.label_index_.end()) return it->second;
  const auto id = static_cast<NodeId>(graph_.nodes_.size());
  graph_.nodes_.push_back(Node{id, key, std::string(uri)});
  graph_.label_index_.emplace(std::move(key), id);
  return id;
}

RelationId GraphBuilder::intern_relation(std::string_view name) {
  std::string key(name);
  auto it = graph_.relation_index_.find(key);
  if (it != graph_.relation_index_.end()) return it->second;
  if (graph_.relations_.size() > 0xffff) {
    throw Error(ErrorKind::kData, "too many distinct relations");
  }
  const auto id = static_cast<RelationId>(graph_.relations_.size());
  graph_.relations_.push_back(Relation{id, key});
  graph_.relation_index_.emplace(std::move(key), id);
  return id;
}

bool GraphBuilder::add_triple(NodeId subject, RelationId relation,
                              NodeId object, double weight) {
  if (subject >= graph_.nodes_.size() || object >= graph_.nodes_.size() ||
      relation >= graph_.relations_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "triple references unknown ids");
  }
  if (dedupe_) {
    std::string key = std::to_string(subject) + ':' + std::to_string(relation) +
                      ':' + std::to_string(object);
    if (!seen_.emplace(std::move(key), true).second) return false;
  }
  graph_.triples_.push_back(Triple{subject, relation, object, weight});
  return true;
}

TripleIndex GraphBuilder::add(std::string_view subject,
                              std::string_view relation,
                              std::string_view object, double weight) {
  const NodeId s = intern_node(subject, subject);
  const RelationId r = intern_relation(relation);
  const NodeId o = intern_node(object, object);
  add_triple(s, r, o, weight);
  return graph_.triples_.size() - 1;
}

KnowledgeGraph GraphBuilder::Build() && {
  KnowledgeGraph& g = graph_;
  const size_t n = g.nodes_.size();
  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (const Triple& t : g.triples_) {
    ++g.out_offsets_[t.subject + 1];
    ++g.in_offsets_[t.object + 1];
  }
  for (size_t i = 0; i < n; ++i) {
    g.out_offsets_[i + 1] += g.out_offsets_[i];
    g.in_offsets_[i + 1] += g.in_offsets_[i];
  }
  g.out_entries_.resize(g.triples_.size());
  g.in_entries_.resize(g.triples_.size());
  std::vector<size_t> out_fill(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  std::vector<size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (TripleIndex i = 0; i < g.triples_.size(); ++i) {
    const Triple& t = g.triples_[i];
    g.out_entries_[out_fill[t.subject]++] = i;
    g.in_entries_[in_fill[t.object]++] = i;
  }
  seen_.clear();
  return std::move(graph_);
}

}  // namespace kgwalk
