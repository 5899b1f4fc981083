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

#include "llm/batch.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "common/error.h"

namespace kgwalk {

std::vector<BatchResult> RunBatch(std::span<const GenRequest> requests,
                                  Backend& backend, size_t parallelism,
                                  const CommitFn& commit) {
  if (parallelism == 0) {
    throw Error(ErrorKind::kInvalidArgument, "parallelism must be >= 1");
  }
  const size_t n = requests.size();
  std::vector<BatchResult> results(n);
  std::vector<bool> done(n, false);
  std::atomic<size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex mu;
  size_t committed = 0;
  std::exception_ptr fatal;

  auto worker = [&] {
    while (!abort.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      BatchResult r;
      r.item_id = requests[i].item_id;
      try {
        r.response = backend.Generate(requests[i]);
      } catch (const TransientBackendError& e) {
        r.error = e.what();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!fatal) fatal = std::current_exception();
        abort.store(true);
        return;
      }
      std::lock_guard lock(mu);
      results[i] = std::move(r);
      done[i] = true;
      // Commit the contiguous completed prefix.
      while (committed < n && done[committed]) {
        if (commit && !fatal) {
          try {
            commit(committed, results[committed]);
          } catch (...) {
            fatal = std::current_exception();
            abort.store(true);
            return;
          }
        }
        ++committed;
      }
    }
  };

  const size_t workers = std::min(parallelism, std::max<size_t>(n, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);
  return results;
}

}  // namespace kgwalk
