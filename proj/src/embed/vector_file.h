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

#ifndef KGWALK_EMBED_VECTOR_FILE_H_
#define KGWALK_EMBED_VECTOR_FILE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgwalk {

// Binary vector file layout (all integers little-endian):
//   magic "KGWV" | version u32 = 1 | dim u32 | count u64 |
//   count x { id_len u32 | id bytes (UTF-8) | dim x f32 }
inline constexpr char kVectorMagic[4] = {'K', 'G', 'W', 'V'};
inline constexpr uint32_t kVectorVersion = 1;
inline constexpr size_t kVectorHeaderSize = 4 + 4 + 4 + 8;

struct VectorRecord {
  std::string id;
  std::vector<float> values;
};

// Streaming writer. The record count is patched into the header on Finish(),
// so a writer that dies early leaves a file the reader rejects as truncated.
class VectorFileWriter {
 public:
  VectorFileWriter(const std::string& path, uint32_t dim);
  ~VectorFileWriter();
  VectorFileWriter(const VectorFileWriter&) = delete;
  VectorFileWriter& operator=(const VectorFileWriter&) = delete;

  void Append(std::string_view id, std::span<const float> values);
  void Finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void WriteVectorFile(const std::string& path, uint32_t dim,
                     std::span<const VectorRecord> records);

}  // namespace kgwalk

#endif  // KGWALK_EMBED_VECTOR_FILE_H_
