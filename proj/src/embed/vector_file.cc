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

#include "embed/vector_file.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "common/error.h"

namespace kgwalk {

static_assert(std::endian::native == std::endian::little,
              "vector files are read and written in host byte order");

struct VectorFileWriter::Impl {
  std::ofstream out;
  std::string path;
  uint32_t dim = 0;
  uint64_t count = 0;
  bool finished = false;
};

VectorFileWriter::VectorFileWriter(const std::string& path, uint32_t dim)
    : impl_(std::make_unique<Impl>()) {
  impl_->path = path;
  impl_->dim = dim;
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) throw Error(ErrorKind::kIo, "cannot write " + path);
  const uint64_t zero = 0;
  impl_->out.write(kVectorMagic, 4);
  impl_->out.write(reinterpret_cast<const char*>(&kVectorVersion), 4);
  impl_->out.write(reinterpret_cast<const char*>(&dim), 4);
  impl_->out.write(reinterpret_cast<const char*>(&zero), 8);
}

VectorFileWriter::~VectorFileWriter() = default;

void VectorFileWriter::Append(std::string_view id,
                              std::span<const float> values) {
  if (impl_->finished) {
    throw Error(ErrorKind::kInvalidArgument, "append after Finish()");
  }
  if (values.size() != impl_->dim) {
    throw Error(ErrorKind::kInvalidArgument,
                "record '" + std::string(id) + "' has dimension " +
                    std::to_string(values.size()) + ", expected " +
                    std::to_string(impl_->dim));
  }
  const auto len = static_cast<uint32_t>(id.size());
  impl_->out.write(reinterpret_cast<const char*>(&len), 4);
  impl_->out.write(id.data(), static_cast<std::streamsize>(id.size()));
  impl_->out.write(reinterpret_cast<const char*>(values.data()),
                   static_cast<std::streamsize>(values.size() * 4));
  ++impl_->count;
}

void VectorFileWriter::Finish() {
  if (impl_->finished) return;
  impl_->out.seekp(12);
  impl_->out.write(reinterpret_cast<const char*>(&impl_->count), 8);
  impl_->out.flush();
  if (!impl_->out) throw Error(ErrorKind::kIo, "write failed: " + impl_->path);
  impl_->out.close();
  impl_->finished = true;
}

void WriteVectorFile(const std::string& path, uint32_t dim,
                     std::span<const VectorRecord> records) {
  VectorFileWriter writer(path, dim);
  for (const auto& r : records) writer.Append(r.id, r.values);
  writer.Finish();
}

}  // namespace kgwalk
