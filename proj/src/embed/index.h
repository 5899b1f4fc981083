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

#ifndef KGWALK_EMBED_INDEX_H_
#define KGWALK_EMBED_INDEX_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embed/vector_file.h"

namespace kgwalk {

// A unit-normalized dense vector. Construction normalizes and rejects zero,
// NaN and Inf input.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  static EmbeddingVector Normalize(std::span<const float> values);

  size_t dim() const { return values_.size(); }
  std::span<const float> values() const { return values_; }

 private:
  std::vector<float> values_;
};

// Dot product of two unit vectors accumulated in double, clamped to [-1, 1].
// Throws Error(kInvalidArgument) on a dimension mismatch.
double Cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class IndexLoadMode {
  kInMemory,  // copy and normalize every vector
  kMapped,    // mmap the file, keep per-record inverse norms
};

struct Hit {
  size_t row = 0;
  std::string_view id;
  double score = 0.0;
};

// Exact cosine search over an id -> vector map.
//
// Results are ordered by descending score, ties broken by ascending id. Ids
// that are decimal integers (node ids, triple indices) compare numerically
// and sort before all other ids, which compare bytewise.
class EmbeddingIndex {
 public:
  EmbeddingIndex();
  ~EmbeddingIndex();
  EmbeddingIndex(EmbeddingIndex&&) noexcept;
  EmbeddingIndex& operator=(EmbeddingIndex&&) noexcept;

  // Validates magic, version, record count, dimension, unique ids and
  // normalizability; each failure is a distinct Error(kData) message.
  static EmbeddingIndex Load(const std::string& path,
                             IndexLoadMode mode = IndexLoadMode::kInMemory);
  static EmbeddingIndex FromRecords(uint32_t dim,
                                    std::span<const VectorRecord> records);

  uint32_t dim() const { return dim_; }
  size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool mapped() const;

  std::string_view id(size_t row) const { return ids_.at(row); }
  std::optional<size_t> find(std::string_view id) const;

  // The stored vector, unit-normalized.
  EmbeddingVector vector(size_t row) const;
  // Throws Error(kNotFound) when the id is absent.
  EmbeddingVector vector(std::string_view id) const;

  double score(size_t row, const EmbeddingVector& query) const;

  // Throws Error(kInvalidArgument) for k == 0 or a dimension mismatch. An
  // empty index yields an empty result. With threads > 1 the scan is split
  // into shards; the result is identical to the sequential scan.
  std::vector<Hit> top_k(const EmbeddingVector& query, size_t k,
                         unsigned threads = 1) const;

  // Head of top_k(query, 1). Throws Error(kInvalidArgument) when empty.
  Hit most_similar(const EmbeddingVector& query) const;

  // Position of a row in ascending id order; lower wins ties.
  uint64_t id_rank(size_t row) const { return rank_[row]; }

 private:
  struct Storage;

  void Finalize();
  double RawDot(size_t row, std::span<const float> query) const;
  void ScanShard(std::span<const float> query, size_t begin, size_t end,
                 size_t k, std::vector<Hit>* out) const;

  uint32_t dim_ = 0;
  std::unique_ptr<Storage> storage_;
  std::vector<std::string_view> ids_;
  std::vector<uint64_t> rank_;
  std::unordered_map<std::string_view, size_t> by_id_;
};

// Ordering used for tie-breaks; exposed for tests.
bool IdLess(std::string_view a, std::string_view b);

}  // namespace kgwalk

#endif  // KGWALK_EMBED_INDEX_H_
