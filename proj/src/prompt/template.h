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

#ifndef KGWALK_PROMPT_TEMPLATE_H_
#define KGWALK_PROMPT_TEMPLATE_H_

#include <span>
#include <string>
#include <string_view>

#include "eval/qa_item.h"

namespace kgwalk {

enum class PromptOrder { kDocumentsThenQuestion, kQuestionThenDocuments };

const char* PromptOrderName(PromptOrder order);
PromptOrder ParsePromptOrder(std::string_view name);

struct PromptText {
  std::string item_id;
  std::string text;
  std::vector<std::string> context_sentences;
};

// Plain-text prompt template with {context}, {question} and {choices}
// placeholders.
//
// {context} expands to one sentence per line and {choices} to "A. <text>"
// lines in dataset order. A line holding only {context} disappears when the
// context is empty. Question-then-documents swaps the lines carrying
// {context} and {question}.
class PromptTemplate {
 public:
  static PromptTemplate Builtin();
  static PromptTemplate FromFile(const std::string& path);
  // Throws Error(kConfig) unless each placeholder appears exactly once and
  // {context} and {question} sit on lines of their own.
  static PromptTemplate FromText(std::string text);

  const std::string& text() const { return text_; }

  PromptText Render(const QAItem& item, std::span<const std::string> context,
                    PromptOrder order) const;

 private:
  std::string text_;
};

}  // namespace kgwalk

#endif  // KGWALK_PROMPT_TEMPLATE_H_
