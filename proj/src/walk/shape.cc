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

#include "walk/shape.h"

#include <algorithm>

#include "common/error.h"
#include "common/text.h"

namespace kgwalk {

std::array<int, 2> EdgePositions(ChainEdge edge) {
  switch (edge) {
    case ChainEdge::k5to4: return {5, 4};
    case ChainEdge::k4to1: return {4, 1};
    case ChainEdge::k1to2: return {1, 2};
    case ChainEdge::k2to3: return {2, 3};
  }
  return {0, 0};
}

std::string EdgeName(ChainEdge edge) {
  const auto p = EdgePositions(edge);
  return std::to_string(p[0]) + "->" + std::to_string(p[1]);
}

ChainShape ChainShape::Parse(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (c != ' ' && c != '(' && c != ')' && c != '\t') cleaned.push_back(c);
  }
  if (cleaned.empty()) throw Error(ErrorKind::kConfig, "empty chain shape");
  std::vector<ChainEdge> listed;
  for (std::string_view part : Split(cleaned, ',')) {
    bool matched = false;
    for (ChainEdge e : kAllChainEdges) {
      if (part == EdgeName(e)) {
        listed.push_back(e);
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw Error(ErrorKind::kConfig,
                  "unknown chain edge '" + std::string(part) +
                      "' (expected one of 5->4, 4->1, 1->2, 2->3)");
    }
  }
  return FromEdges(std::move(listed));
}

ChainShape ChainShape::FromEdges(std::vector<ChainEdge> listed) {
  if (listed.empty()) throw Error(ErrorKind::kConfig, "empty chain shape");
  std::vector<ChainEdge> sorted = listed;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kConfig, "chain shape repeats an edge");
  }
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (static_cast<int>(sorted[i]) != static_cast<int>(sorted[i - 1]) + 1) {
      throw Error(ErrorKind::kConfig,
                  "chain shape must be a contiguous part of 5->4->1->2->3");
    }
  }
  const bool touches_anchor =
      std::find_if(sorted.begin(), sorted.end(), [](ChainEdge e) {
        return e == ChainEdge::k4to1 || e == ChainEdge::k1to2;
      }) != sorted.end();
  if (!touches_anchor) {
    throw Error(ErrorKind::kConfig,
                "chain shape must include 4->1 or 1->2 (an edge at the anchor)");
  }
  ChainShape shape;
  shape.edges_ = std::move(sorted);
  shape.listed_ = std::move(listed);
  return shape;
}

size_t ChainShape::backward_count() const {
  return static_cast<size_t>(std::count_if(
      edges_.begin(), edges_.end(),
      [](ChainEdge e) { return e == ChainEdge::k5to4 || e == ChainEdge::k4to1; }));
}

size_t ChainShape::forward_count() const {
  return edges_.size() - backward_count();
}

bool ChainShape::contains(ChainEdge edge) const { return position(edge) >= 0; }

int ChainShape::position(ChainEdge edge) const {
  auto it = std::find(edges_.begin(), edges_.end(), edge);
  return it == edges_.end() ? -1 : static_cast<int>(it - edges_.begin());
}

std::vector<size_t> ChainShape::listed_permutation() const {
  std::vector<size_t> perm;
  for (ChainEdge e : listed_) perm.push_back(static_cast<size_t>(position(e)));
  return perm;
}

std::string ChainShape::ToString() const {
  std::string out;
  for (ChainEdge e : listed_) {
    if (!out.empty()) out += ',';
    out += EdgeName(e);
  }
  return out;
}

}  // namespace kgwalk
