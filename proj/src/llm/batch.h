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

#ifndef KGWALK_LLM_BATCH_H_
#define KGWALK_LLM_BATCH_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llm/backend.h"

namespace kgwalk {

struct BatchResult {
  std::string item_id;
  std::optional<GenResponse> response;
  std::string error;  // set when the item failed transiently

  bool ok() const { return response.has_value(); }
};

// Called once per request in input order, serialized. Used to append to a
// journal as soon as the completed prefix grows.
using CommitFn = std::function<void(size_t index, const BatchResult&)>;

// Fans requests out over `parallelism` workers. Output order is input order
// whatever the completion order. Transient failures are recorded per item;
// any other error stops further dispatch and is rethrown after in-flight
// requests finish (results already committed stay committed).
std::vector<BatchResult> RunBatch(std::span<const GenRequest> requests,
                                  Backend& backend, size_t parallelism,
                                  const CommitFn& commit = nullptr);

}  // namespace kgwalk

#endif  // KGWALK_LLM_BATCH_H_
