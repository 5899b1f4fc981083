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

#include "embed/index.h"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <thread>

#include "common/error.h"

namespace kgwalk {
namespace {

bool IsDecimal(std::string_view s) {
  if (s.empty() || s.size() > 19) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

uint64_t ParseDecimal(std::string_view s) {
  uint64_t v = 0;
  for (char c : s) v = v * 10 + static_cast<uint64_t>(c - '0');
  return v;
}

double SumSquares(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * static_cast<double>(x);
  return s;
}

double Clamp(double v) { return std::clamp(v, -1.0, 1.0); }

// Strict total order on hits: higher score first, then lower id rank.
struct Better {
  const std::vector<uint64_t>* rank;
  bool operator()(const Hit& a, const Hit& b) const {
    if (a.score != b.score) return a.score > b.score;
    return (*rank)[a.row] < (*rank)[b.row];
  }
};

class FileMapping {
 public:
  explicit FileMapping(const std::string& path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw Error(ErrorKind::kIo, "cannot open " + path);
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
      ::close(fd_);
      throw Error(ErrorKind::kIo, "cannot stat " + path);
    }
    size_ = static_cast<size_t>(st.st_size);
    if (size_ > 0) {
      void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd_, 0);
      if (p == MAP_FAILED) {
        ::close(fd_);
        throw Error(ErrorKind::kIo, "cannot mmap " + path);
      }
      data_ = static_cast<const char*>(p);
    }
    ::close(fd_);
  }
  ~FileMapping() {
    if (data_ != nullptr) ::munmap(const_cast<char*>(data_), size_);
  }
  FileMapping(const FileMapping&) = delete;
  FileMapping& operator=(const FileMapping&) = delete;

  const char* data() const { return data_; }
  size_t size() const { return size_; }

 private:
  int fd_ = -1;
  const char* data_ = nullptr;
  size_t size_ = 0;
};

}  // namespace

bool IdLess(std::string_view a, std::string_view b) {
  const bool da = IsDecimal(a);
  const bool db = IsDecimal(b);
  if (da != db) return da;
  if (da) {
    const uint64_t va = ParseDecimal(a);
    const uint64_t vb = ParseDecimal(b);
    if (va != vb) return va < vb;
  }
  return a < b;
}

EmbeddingVector EmbeddingVector::Normalize(std::span<const float> values) {
  for (float x : values) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kData, "vector has a NaN or Inf component");
    }
  }
  const double norm = std::sqrt(SumSquares(values));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::kData, "non-normalizable vector (zero norm)");
  }
  EmbeddingVector v;
  v.values_.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    v.values_[i] = static_cast<float>(static_cast<double>(values[i]) / norm);
  }
  return v;
}

double Cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kInvalidArgument,
                "cosine of vectors with dimensions " + std::to_string(a.dim()) +
                    " and " + std::to_string(b.dim()));
  }
  double dot = 0.0;
  for (size_t i = 0; i < a.dim(); ++i) {
    dot += static_cast<double>(a.values()[i]) *
           static_cast<double>(b.values()[i]);
  }
  return Clamp(dot);
}

struct EmbeddingIndex::Storage {
  // In-memory mode.
  std::vector<char> id_blob;
  std::vector<float> matrix;  // size x dim, normalized
  // Mapped mode.
  std::unique_ptr<FileMapping> mapping;
  std::vector<uint64_t> offsets;  // byte offset of each record's floats
  std::vector<double> inv_norm;
};

EmbeddingIndex::EmbeddingIndex() : storage_(std::make_unique<Storage>()) {}
EmbeddingIndex::~EmbeddingIndex() = default;
EmbeddingIndex::EmbeddingIndex(EmbeddingIndex&&) noexcept = default;
EmbeddingIndex& EmbeddingIndex::operator=(EmbeddingIndex&&) noexcept = default;

bool EmbeddingIndex::mapped() const { return storage_->mapping != nullptr; }

EmbeddingIndex EmbeddingIndex::Load(const std::string& path,
                                    IndexLoadMode mode) {
  auto mapping = std::make_unique<FileMapping>(path);
  const char* base = mapping->data();
  const size_t size = mapping->size();
  auto fail = [&](const std::string& what) {
    return Error(ErrorKind::kData, path + ": " + what);
  };
  if (size < 4 || std::memcmp(base, kVectorMagic, 4) != 0) {
    throw fail("bad magic (expected \"KGWV\")");
  }
  if (size < kVectorHeaderSize) throw fail("truncated file (short header)");
  uint32_t version = 0;
  uint32_t dim = 0;
  uint64_t count = 0;
  std::memcpy(&version, base + 4, 4);
  std::memcpy(&dim, base + 8, 4);
  std::memcpy(&count, base + 12, 8);
  if (version != kVectorVersion) {
    throw fail("unsupported version " + std::to_string(version));
  }
  if (dim == 0) throw fail("dimension disagreement: header dimension is 0");

  EmbeddingIndex index;
  index.dim_ = dim;
  Storage& st = *index.storage_;
  const size_t vec_bytes = static_cast<size_t>(dim) * 4;
  std::vector<std::pair<size_t, uint32_t>> id_spans;
  id_spans.reserve(static_cast<size_t>(std::min<uint64_t>(count, size / 8)));
  st.offsets.reserve(id_spans.capacity());
  size_t pos = kVectorHeaderSize;
  std::vector<float> scratch(dim);
  if (mode == IndexLoadMode::kInMemory &&
      count <= (size - kVectorHeaderSize) / (vec_bytes + 4)) {
    st.matrix.reserve(static_cast<size_t>(count) * dim);
  }
  for (uint64_t r = 0; r < count; ++r) {
    if (size - pos < 4) {
      throw fail("truncated file: header declares " + std::to_string(count) +
                 " records, found " + std::to_string(r));
    }
    uint32_t len = 0;
    std::memcpy(&len, base + pos, 4);
    pos += 4;
    if (size - pos < static_cast<size_t>(len) + vec_bytes) {
      throw fail("truncated file: header declares " + std::to_string(count) +
                 " records, found " + std::to_string(r));
    }
    id_spans.emplace_back(pos, len);
    pos += len;
    std::memcpy(scratch.data(), base + pos, vec_bytes);
    for (float x : scratch) {
      if (!std::isfinite(x)) {
        throw fail("record " + std::to_string(r) + " has a NaN or Inf component");
      }
    }
    const double sq = SumSquares(scratch);
    if (!(sq > 0.0) || !std::isfinite(sq)) {
      throw fail("non-normalizable vector at record " + std::to_string(r) +
                 " (zero norm)");
    }
    const double norm = std::sqrt(sq);
    if (mode == IndexLoadMode::kMapped) {
      st.offsets.push_back(pos);
      st.inv_norm.push_back(1.0 / norm);
    } else {
      for (float x : scratch) {
        st.matrix.push_back(static_cast<float>(static_cast<double>(x) / norm));
      }
    }
    pos += vec_bytes;
  }
  if (pos != size) {
    throw fail("dimension disagreement: " + std::to_string(size - pos) +
               " unexpected bytes after " + std::to_string(count) +
               " records of dimension " + std::to_string(dim));
  }

  if (mode == IndexLoadMode::kMapped) {
    for (const auto& [off, len] : id_spans) {
      index.ids_.emplace_back(base + off, len);
    }
    st.mapping = std::move(mapping);
  } else {
    size_t total = 0;
    for (const auto& span : id_spans) total += span.second;
    st.id_blob.resize(total);
    size_t at = 0;
    for (const auto& [off, len] : id_spans) {
      std::memcpy(st.id_blob.data() + at, base + off, len);
      at += len;
    }
    at = 0;
    for (const auto& span : id_spans) {
      index.ids_.emplace_back(st.id_blob.data() + at, span.second);
      at += span.second;
    }
  }
  try {
    index.Finalize();
  } catch (const Error& e) {
    throw fail(e.what());
  }
  return index;
}

EmbeddingIndex EmbeddingIndex::FromRecords(
    uint32_t dim, std::span<const VectorRecord> records) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "dimension is 0");
  EmbeddingIndex index;
  index.dim_ = dim;
  Storage& st = *index.storage_;
  size_t total = 0;
  for (const auto& r : records) total += r.id.size();
  st.id_blob.resize(total);
  st.matrix.reserve(records.size() * dim);
  size_t at = 0;
  for (const auto& r : records) {
    if (r.values.size() != dim) {
      throw Error(ErrorKind::kData,
                  "dimension disagreement for id '" + r.id + "'");
    }
    const EmbeddingVector v = EmbeddingVector::Normalize(r.values);
    st.matrix.insert(st.matrix.end(), v.values().begin(), v.values().end());
    std::memcpy(st.id_blob.data() + at, r.id.data(), r.id.size());
    index.ids_.emplace_back(st.id_blob.data() + at, r.id.size());
    at += r.id.size();
  }
  index.Finalize();
  return index;
}

void EmbeddingIndex::Finalize() {
  by_id_.reserve(ids_.size());
  for (size_t i = 0; i < ids_.size(); ++i) {
    if (!by_id_.emplace(ids_[i], i).second) {
      throw Error(ErrorKind::kData, "duplicate id '" + std::string(ids_[i]) + "'");
    }
  }
  std::vector<size_t> order(ids_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [this](size_t a, size_t b) { return IdLess(ids_[a], ids_[b]); });
  rank_.resize(ids_.size());
  for (size_t pos = 0; pos < order.size(); ++pos) rank_[order[pos]] = pos;
}

std::optional<size_t> EmbeddingIndex::find(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

EmbeddingVector EmbeddingIndex::vector(size_t row) const {
  if (row >= size()) {
    throw Error(ErrorKind::kNotFound, "row " + std::to_string(row) +
                                          " out of range");
  }
  if (!mapped()) {
    return EmbeddingVector::Normalize(std::span<const float>(
        storage_->matrix.data() + row * dim_, dim_));
  }
  std::vector<float> raw(dim_);
  std::memcpy(raw.data(), storage_->mapping->data() + storage_->offsets[row],
              static_cast<size_t>(dim_) * 4);
  return EmbeddingVector::Normalize(raw);
}

EmbeddingVector EmbeddingIndex::vector(std::string_view id) const {
  auto row = find(id);
  if (!row) {
    throw Error(ErrorKind::kNotFound, "no vector for id '" + std::string(id) + "'");
  }
  return vector(*row);
}

double EmbeddingIndex::RawDot(size_t row, std::span<const float> query) const {
  double dot = 0.0;
  if (!mapped()) {
    const float* v = storage_->matrix.data() + row * dim_;
    for (uint32_t i = 0; i < dim_; ++i) {
      dot += static_cast<double>(v[i]) * static_cast<double>(query[i]);
    }
    return dot;
  }
  // Records are not 4-byte aligned in the file.
  const char* p = storage_->mapping->data() + storage_->offsets[row];
  for (uint32_t i = 0; i < dim_; ++i) {
    float x;
    std::memcpy(&x, p + 4 * static_cast<size_t>(i), 4);
    dot += static_cast<double>(x) * static_cast<double>(query[i]);
  }
  return dot * storage_->inv_norm[row];
}

double EmbeddingIndex::score(size_t row, const EmbeddingVector& query) const {
  if (query.dim() != dim_) {
    throw Error(ErrorKind::kInvalidArgument,
                "query dimension " + std::to_string(query.dim()) +
                    " does not match index dimension " + std::to_string(dim_));
  }
  if (row >= size()) {
    throw Error(ErrorKind::kNotFound, "row " + std::to_string(row) +
                                          " out of range");
  }
  return Clamp(RawDot(row, query.values()));
}

void EmbeddingIndex::ScanShard(std::span<const float> query, size_t begin,
                               size_t end, size_t k,
                               std::vector<Hit>* out) const {
  const Better better{&rank_};
  // Min-heap on "better": the front is the worst hit kept so far.
  std::vector<Hit>& heap = *out;
  heap.clear();
  heap.reserve(std::min(k, end - begin) + 1);
  for (size_t row = begin; row < end; ++row) {
    Hit h{row, ids_[row], Clamp(RawDot(row, query))};
    if (heap.size() < k) {
      heap.push_back(h);
      std::push_heap(heap.begin(), heap.end(), better);
    } else if (better(h, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), better);
      heap.back() = h;
      std::push_heap(heap.begin(), heap.end(), better);
    }
  }
}

std::vector<Hit> EmbeddingIndex::top_k(const EmbeddingVector& query, size_t k,
                                       unsigned threads) const {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "top_k requires k >= 1");
  if (query.dim() != dim_ && !empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "query dimension " + std::to_string(query.dim()) +
                    " does not match index dimension " + std::to_string(dim_));
  }
  if (empty()) return {};
  const size_t n = size();
  const size_t shards =
      std::max<size_t>(1, std::min<size_t>(threads, n / 4096 + 1));
  std::vector<std::vector<Hit>> partial(shards);
  if (shards == 1) {
    ScanShard(query.values(), 0, n, k, &partial[0]);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (size_t s = 0; s < shards; ++s) {
      const size_t begin = n * s / shards;
      const size_t end = n * (s + 1) / shards;
      workers.emplace_back([this, &query, &partial, s, begin, end, k] {
        ScanShard(query.values(), begin, end, k, &partial[s]);
      });
    }
  }
  std::vector<Hit> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
  const Better better{&rank_};
  const size_t keep = std::min(k, merged.size());
  std::partial_sort(merged.begin(), merged.begin() + static_cast<long>(keep),
                    merged.end(), better);
  merged.resize(keep);
  return merged;
}

Hit EmbeddingIndex::most_similar(const EmbeddingVector& query) const {
  if (empty()) {
    throw Error(ErrorKind::kInvalidArgument, "most_similar on an empty index");
  }
  return top_k(query, 1).front();
}

}  // namespace kgwalk
