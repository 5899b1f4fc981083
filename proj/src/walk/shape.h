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

#ifndef KGWALK_WALK_SHAPE_H_
#define KGWALK_WALK_SHAPE_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace kgwalk {

// Chain positions are numbered around the anchor (node 1) along one directed
// path: 5 -> 4 -> 1 -> 2 -> 3. Nodes 4 and 5 are inbound predecessors, nodes
// 2 and 3 outbound successors. The four edges of that path, in order:
enum class ChainEdge : int {
  k5to4 = 0,
  k4to1 = 1,
  k1to2 = 2,
  k2to3 = 3,
};

inline constexpr std::array<ChainEdge, 4> kAllChainEdges = {
    ChainEdge::k5to4, ChainEdge::k4to1, ChainEdge::k1to2, ChainEdge::k2to3};

// (from, to) node numbers of an edge, e.g. {4, 1}.
std::array<int, 2> EdgePositions(ChainEdge edge);
std::string EdgeName(ChainEdge edge);  // "4->1"

// A contiguous stretch of the 5 -> 4 -> 1 -> 2 -> 3 path that touches the
// anchor, plus the order in which its edges were listed. Listing the edges
// out of path order, e.g. "1->2, 4->1", describes an irregular presentation.
class ChainShape {
 public:
  // Accepts "4->1,1->2", "(4 -> 1, 1 -> 2)" and similar spellings.
  // Throws Error(kConfig) for unknown edges, gaps, duplicates, or stretches
  // that do not touch node 1.
  static ChainShape Parse(std::string_view text);
  static ChainShape FromEdges(std::vector<ChainEdge> listed);

  // Edges in path order.
  const std::vector<ChainEdge>& edges() const { return edges_; }
  // Edges in the order they were written.
  const std::vector<ChainEdge>& listed() const { return listed_; }

  size_t edge_count() const { return edges_.size(); }
  size_t node_count() const { return edges_.size() + 1; }
  size_t backward_count() const;  // edges among 5->4, 4->1
  size_t forward_count() const;   // edges among 1->2, 2->3
  bool contains(ChainEdge edge) const;
  // Position of edge within edges(), or -1.
  int position(ChainEdge edge) const;

  // Listed order as a permutation of path positions, e.g. "1->2,4->1"
  // gives {1, 0}.
  std::vector<size_t> listed_permutation() const;
  bool listed_in_path_order() const { return listed_ == edges_; }

  // Canonical spelling in listed order: "4->1,1->2".
  std::string ToString() const;

 private:
  std::vector<ChainEdge> edges_;
  std::vector<ChainEdge> listed_;
};

}  // namespace kgwalk

#endif  // KGWALK_WALK_SHAPE_H_
