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

#include "eval/scorer.h"

#include <algorithm>
#include <set>
#include <vector>

#include "common/error.h"
#include "common/text.h"

namespace kgwalk {
namespace {

struct Span {
  size_t begin = 0;
  size_t end = 0;
  char label = 0;  // choice the span belongs to, or the letter itself
};

bool Boundary(std::string_view s, size_t pos) {
  return pos >= s.size() || !IsAsciiAlnum(s[pos]);
}

bool BoundaryBefore(std::string_view s, size_t pos) {
  return pos == 0 || !IsAsciiAlnum(s[pos - 1]);
}

std::vector<Span> FindTextMatches(std::string_view response,
                                  const QAItem& item) {
  const std::string hay = AsciiLower(response);
  std::vector<Span> all;
  for (const Choice& c : item.choices) {
    const std::string needle = AsciiLower(Trim(c.text));
    if (needle.empty()) continue;
    for (size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + 1)) {
      const size_t end = pos + needle.size();
      if (BoundaryBefore(hay, pos) && Boundary(hay, end)) {
        all.push_back({pos, end, c.label});
      }
    }
  }
  // Longest first; keep non-overlapping.
  std::stable_sort(all.begin(), all.end(), [](const Span& a, const Span& b) {
    if (a.end - a.begin != b.end - b.begin) {
      return a.end - a.begin > b.end - b.begin;
    }
    return a.begin < b.begin;
  });
  std::vector<Span> kept;
  for (const Span& s : all) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Span& k) {
      return s.begin < k.end && k.begin < s.end;
    });
    if (!overlaps) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  return kept;
}

std::vector<Span> FindLetters(std::string_view response,
                              const std::vector<Span>& texts) {
  std::vector<Span> letters;
  for (size_t i = 0; i < response.size(); ++i) {
    const char c = response[i];
    if (c < 'A' || c > 'E') continue;
    if (!BoundaryBefore(response, i) || !Boundary(response, i + 1)) continue;
    const bool inside = std::any_of(texts.begin(), texts.end(), [&](const Span& t) {
      return i >= t.begin && i < t.end;
    });
    if (!inside) letters.push_back({i, i + 1, c});
  }
  return letters;
}

// A text span directly after a letter (separated only by punctuation and
// blanks) is that letter's label target.
bool LabelsText(std::string_view response, const Span& letter,
                const Span& text) {
  if (text.begin < letter.end) return false;
  for (size_t i = letter.end; i < text.begin; ++i) {
    const char c = response[i];
    if (c != ' ' && c != '\t' && c != '.' && c != ',' && c != ':' &&
        c != ')' && c != ']' && c != '-') {
      return false;
    }
  }
  return true;
}

}  // namespace

const char* ReasonName(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::kLetterMatch: return "letter-match";
    case VerdictReason::kTextMatch: return "text-match";
    case VerdictReason::kWrongLetter: return "wrong-letter";
    case VerdictReason::kMultiSelect: return "multi-select";
    case VerdictReason::kIrrelevant: return "irrelevant";
    case VerdictReason::kErrorFlagged: return "error-flagged";
  }
  return "irrelevant";
}

std::optional<VerdictReason> ParseReason(std::string_view name) {
  for (auto r : {VerdictReason::kLetterMatch, VerdictReason::kTextMatch,
                 VerdictReason::kWrongLetter, VerdictReason::kMultiSelect,
                 VerdictReason::kIrrelevant, VerdictReason::kErrorFlagged}) {
    if (name == ReasonName(r)) return r;
  }
  return std::nullopt;
}

Verdict ScoreResponse(std::string_view response, const QAItem& item) {
  Verdict v{item.id, false, VerdictReason::kIrrelevant};
  const char key = item.answer_key;
  std::vector<Span> texts;
  if (!item.duplicate_choice_texts) texts = FindTextMatches(response, item);
  const std::vector<Span> letters = FindLetters(response, texts);

  std::set<char> selected;      // choices picked
  std::set<char> valid_letters;  // every valid letter written
  std::vector<bool> text_labelled(texts.size(), false);
  for (const Span& letter : letters) {
    if (item.choice(letter.label) == nullptr) continue;  // e.g. D on 3 choices
    valid_letters.insert(letter.label);
    bool labels_text = false;
    for (size_t t = 0; t < texts.size(); ++t) {
      if (LabelsText(response, letter, texts[t])) {
        text_labelled[t] = true;
        labels_text = true;
        break;
      }
    }
    if (!labels_text) selected.insert(letter.label);
  }
  for (const Span& t : texts) selected.insert(t.label);

  if (selected.size() >= 2) {
    v.reason = VerdictReason::kMultiSelect;
    return v;
  }
  if (valid_letters.contains(key) && !selected.empty() &&
      !selected.contains(key)) {
    v.reason = VerdictReason::kMultiSelect;
    return v;
  }
  if (selected.size() == 1 && *selected.begin() == key) {
    const bool other_letter = std::any_of(
        valid_letters.begin(), valid_letters.end(),
        [key](char l) { return l != key; });
    if (other_letter) {
      v.reason = VerdictReason::kWrongLetter;
      return v;
    }
    v.correct = true;
    v.reason = valid_letters.contains(key) ? VerdictReason::kLetterMatch
                                           : VerdictReason::kTextMatch;
    return v;
  }
  return v;
}

Verdict ErrorVerdict(const QAItem& item) {
  return Verdict{item.id, false, VerdictReason::kErrorFlagged};
}

AccuracySummary Accuracy(std::span<const Verdict> verdicts) {
  if (verdicts.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "accuracy of zero verdicts");
  }
  AccuracySummary s;
  s.n = verdicts.size();
  for (const Verdict& v : verdicts) {
    if (v.correct) ++s.correct;
    if (v.reason == VerdictReason::kErrorFlagged) ++s.errors;
    ++s.reason_histogram[ReasonName(v.reason)];
  }
  s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.n);
  return s;
}

}  // namespace kgwalk
