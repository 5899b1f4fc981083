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

#ifndef KGWALK_EVAL_QA_ITEM_H_
#define KGWALK_EVAL_QA_ITEM_H_

#include <string>
#include <string_view>
#include <vector>

namespace kgwalk {

struct Choice {
  char label = 'A';
  std::string text;
};

// One CommonsenseQA record.
struct QAItem {
  std::string id;
  std::string stem;
  std::string question_concept;
  std::vector<Choice> choices;
  char answer_key = 'A';
  // Set when two choices share the same text (case-insensitive); such items
  // are scored on letters only.
  bool duplicate_choice_texts = false;

  const Choice* choice(char label) const;
};

// Checks labels are unique and within A..E, the answer key is one of them,
// and flags duplicate choice texts. Throws Error(kData).
void ValidateItem(QAItem& item);

// Parses CommonsenseQA JSON-lines: id, question.stem,
// question.question_concept, question.choices[{label,text}], answerKey.
// Blank lines are ignored; anything else malformed is Error(kData) with the
// line number.
std::vector<QAItem> ParseDataset(std::string_view jsonl);
std::vector<QAItem> LoadDataset(const std::string& path);

}  // namespace kgwalk

#endif  // KGWALK_EVAL_QA_ITEM_H_
