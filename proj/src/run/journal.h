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

#ifndef KGWALK_RUN_JOURNAL_H_
#define KGWALK_RUN_JOURNAL_H_

#include <cstdint>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "eval/scorer.h"

namespace kgwalk {

// One generation outcome. Serialized as a JSON line
// {item_id, prompt_hash, text, latency_ms, backend[, error]}.
struct JournalEntry {
  std::string item_id;
  std::string prompt_hash;
  std::string text;
  int64_t latency_ms = 0;
  std::string backend;
  std::string error;  // non-empty: the item is error-flagged

  bool failed() const { return !error.empty(); }
};

std::string JournalLine(const JournalEntry& entry);

// Parses a journal. A final line without its newline is an interrupted
// append: with `allow_partial_tail` it is dropped and *valid_bytes tells how
// much of the file to keep; otherwise it is an Error(kData).
std::vector<JournalEntry> ParseJournal(std::string_view contents,
                                       bool allow_partial_tail,
                                       size_t* valid_bytes = nullptr);
std::vector<JournalEntry> ReadJournal(const std::string& path);

// Append-only writer; each Append is flushed before returning.
class JournalWriter {
 public:
  explicit JournalWriter(const std::string& path);
  void Append(const JournalEntry& entry);

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::string path_;
};

std::string ResultLine(const Verdict& verdict);

// {n, correct, errors, accuracy, reason_histogram, config_digest}
std::string SummaryJson(const AccuracySummary& summary,
                        const std::string& config_digest);

}  // namespace kgwalk

#endif  // KGWALK_RUN_JOURNAL_H_
