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

#ifndef KGWALK_COMMON_ERROR_H_
#define KGWALK_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace kgwalk {

// Broad failure classes. The C API and the CLI map these onto status and
// exit codes, so keep the set small.
enum class ErrorKind {
  kConfig,
  kData,
  kBackend,
  kIo,
  kInvalidArgument,
  kNotFound,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// A backend call that failed after all retries. Batch execution records it
// against the item and keeps going; every other Error aborts the batch.
class TransientBackendError : public Error {
 public:
  explicit TransientBackendError(const std::string& message)
      : Error(ErrorKind::kBackend, message) {}
};

}  // namespace kgwalk

#endif  // KGWALK_COMMON_ERROR_H_
