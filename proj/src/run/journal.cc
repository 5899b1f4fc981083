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

#include "run/journal.h"

#include "common/error.h"
#include "common/text.h"
#include "json.hpp"

namespace kgwalk {

using OrderedJson = nlohmann::ordered_json;

std::string JournalLine(const JournalEntry& e) {
  OrderedJson j;
  j["item_id"] = e.item_id;
  j["prompt_hash"] = e.prompt_hash;
  j["text"] = e.text;
  j["latency_ms"] = e.latency_ms;
  j["backend"] = e.backend;
  if (e.failed()) j["error"] = e.error;
  return j.dump() + "\n";
}

std::vector<JournalEntry> ParseJournal(std::string_view contents,
                                       bool allow_partial_tail,
                                       size_t* valid_bytes) {
  std::vector<JournalEntry> entries;
  size_t pos = 0;
  int line_no = 0;
  while (pos < contents.size()) {
    ++line_no;
    const size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (allow_partial_tail) break;
      throw Error(ErrorKind::kData,
                  "journal line " + std::to_string(line_no) +
                      " is incomplete (no trailing newline)");
    }
    const std::string_view line = contents.substr(pos, nl - pos);
    if (!Trim(line).empty()) {
      OrderedJson j = OrderedJson::parse(line, nullptr, false);
      try {
        if (j.is_discarded()) throw std::runtime_error("not JSON");
        JournalEntry e;
        e.item_id = j.at("item_id").get<std::string>();
        e.prompt_hash = j.at("prompt_hash").get<std::string>();
        e.text = j.at("text").get<std::string>();
        e.latency_ms = j.at("latency_ms").get<int64_t>();
        e.backend = j.at("backend").get<std::string>();
        if (j.contains("error")) e.error = j.at("error").get<std::string>();
        entries.push_back(std::move(e));
      } catch (const std::exception& ex) {
        throw Error(ErrorKind::kData, "journal line " +
                                          std::to_string(line_no) + ": " +
                                          ex.what());
      }
    }
    pos = nl + 1;
  }
  if (valid_bytes != nullptr) *valid_bytes = pos;
  return entries;
}

std::vector<JournalEntry> ReadJournal(const std::string& path) {
  return ParseJournal(ReadFile(path), false);
}

JournalWriter::JournalWriter(const std::string& path) : path_(path) {
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorKind::kIo, "cannot open journal " + path);
}

void JournalWriter::Append(const JournalEntry& entry) {
  const std::string line = JournalLine(entry);
  std::lock_guard lock(mu_);
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) throw Error(ErrorKind::kIo, "journal write failed: " + path_);
}

std::string ResultLine(const Verdict& v) {
  OrderedJson j;
  j["item_id"] = v.item_id;
  j["correct"] = v.correct;
  j["reason"] = ReasonName(v.reason);
  return j.dump() + "\n";
}

std::string SummaryJson(const AccuracySummary& s,
                        const std::string& config_digest) {
  OrderedJson j;
  j["n"] = s.n;
  j["correct"] = s.correct;
  j["errors"] = s.errors;
  j["accuracy"] = s.accuracy;
  OrderedJson hist = OrderedJson::object();
  for (const auto& [reason, count] : s.reason_histogram) hist[reason] = count;
  j["reason_histogram"] = hist;
  j["config_digest"] = config_digest.empty() ? OrderedJson(nullptr)
                                             : OrderedJson(config_digest);
  return j.dump(2) + "\n";
}

}  // namespace kgwalk
