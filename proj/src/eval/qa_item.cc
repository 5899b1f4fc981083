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

#include "eval/qa_item.h"

#include <set>

#include "common/error.h"
#include "common/text.h"
#include "json.hpp"

namespace kgwalk {

const Choice* QAItem::choice(char label) const {
  for (const Choice& c : choices) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

void ValidateItem(QAItem& item) {
  if (item.id.empty()) throw Error(ErrorKind::kData, "item with empty id");
  if (item.choices.empty()) {
    throw Error(ErrorKind::kData, "item " + item.id + " has no choices");
  }
  std::set<char> labels;
  std::set<std::string> texts;
  item.duplicate_choice_texts = false;
  for (const Choice& c : item.choices) {
    if (c.label < 'A' || c.label > 'E') {
      throw Error(ErrorKind::kData, "item " + item.id + ": label '" +
                                        std::string(1, c.label) +
                                        "' outside A..E");
    }
    if (!labels.insert(c.label).second) {
      throw Error(ErrorKind::kData, "item " + item.id + ": duplicate label " +
                                        std::string(1, c.label));
    }
    if (!texts.insert(AsciiLower(Trim(c.text))).second) {
      item.duplicate_choice_texts = true;
    }
  }
  if (!labels.contains(item.answer_key)) {
    throw Error(ErrorKind::kData, "item " + item.id + ": answer key " +
                                      std::string(1, item.answer_key) +
                                      " is not a choice label");
  }
}

std::vector<QAItem> ParseDataset(std::string_view jsonl) {
  std::vector<QAItem> items;
  std::set<std::string> ids;
  int line_no = 0;
  for (std::string_view line : Split(jsonl, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto where = "dataset line " + std::to_string(line_no) + ": ";
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorKind::kData, where + "not a JSON object");
    }
    try {
      QAItem item;
      item.id = j.at("id").get<std::string>();
      const auto& q = j.at("question");
      item.stem = q.at("stem").get<std::string>();
      item.question_concept = q.value("question_concept", std::string());
      for (const auto& c : q.at("choices")) {
        const auto label = c.at("label").get<std::string>();
        if (label.size() != 1) {
          throw Error(ErrorKind::kData, where + "choice label '" + label +
                                            "' is not a single letter");
        }
        item.choices.push_back(Choice{label[0], c.at("text").get<std::string>()});
      }
      const auto key = j.at("answerKey").get<std::string>();
      if (key.size() != 1) {
        throw Error(ErrorKind::kData, where + "answerKey must be one letter");
      }
      item.answer_key = key[0];
      ValidateItem(item);
      if (!ids.insert(item.id).second) {
        throw Error(ErrorKind::kData, where + "duplicate item id " + item.id);
      }
      items.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kData, where + e.what());
    } catch (const Error& e) {
      if (std::string_view(e.what()).starts_with("dataset line")) throw;
      throw Error(ErrorKind::kData, where + e.what());
    }
  }
  return items;
}

std::vector<QAItem> LoadDataset(const std::string& path) {
  return ParseDataset(ReadFile(path));
}

}  // namespace kgwalk
