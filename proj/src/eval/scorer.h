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

#ifndef KGWALK_EVAL_SCORER_H_
#define KGWALK_EVAL_SCORER_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "eval/qa_item.h"

namespace kgwalk {

enum class VerdictReason {
  kLetterMatch,
  kTextMatch,
  kWrongLetter,
  kMultiSelect,
  kIrrelevant,
  kErrorFlagged,
};

const char* ReasonName(VerdictReason reason);
std::optional<VerdictReason> ParseReason(std::string_view name);

struct Verdict {
  std::string item_id;
  bool correct = false;
  VerdictReason reason = VerdictReason::kIrrelevant;
};

// Lenient multiple-choice matching. Total and deterministic.
//
// The response is scanned for standalone A-E letter tokens (optionally
// followed by ". , : )") and for choice texts appearing case-insensitively on
// token boundaries; overlapping text matches keep the longest, and letters
// inside a matched text do not count. A letter directly followed by a choice
// text labels that text rather than selecting a second choice. Then:
//   1. two or more distinct choices selected -> multi-select
//   2. the correct letter plus another choice's text -> multi-select
//   3. only the correct text, but labelled with another valid letter
//      -> wrong-letter
//   4. only the correct choice, by letter and/or text -> correct
//   5. anything else -> irrelevant
// Items with duplicate choice texts are scored on letters alone.
Verdict ScoreResponse(std::string_view response, const QAItem& item);

Verdict ErrorVerdict(const QAItem& item);

struct AccuracySummary {
  size_t n = 0;
  size_t correct = 0;
  size_t errors = 0;  // error-flagged, counted as incorrect
  double accuracy = 0.0;
  std::map<std::string, size_t> reason_histogram;
};

// Throws Error(kInvalidArgument) on an empty list.
AccuracySummary Accuracy(std::span<const Verdict> verdicts);

}  // namespace kgwalk

#endif  // KGWALK_EVAL_SCORER_H_
