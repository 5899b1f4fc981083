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

#include "prompt/template.h"

#include <utility>
#include <vector>

#include "common/error.h"
#include "common/text.h"

namespace kgwalk {

extern const char kBuiltinPromptTemplate[];

namespace {

constexpr std::string_view kContext = "{context}";
constexpr std::string_view kQuestion = "{question}";
constexpr std::string_view kChoices = "{choices}";

size_t CountOf(std::string_view hay, std::string_view needle) {
  size_t n = 0;
  for (size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

void ReplaceOnce(std::string& s, std::string_view from, std::string_view to) {
  const size_t pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
}

}  // namespace

const char* PromptOrderName(PromptOrder order) {
  return order == PromptOrder::kDocumentsThenQuestion
             ? "documents-then-question"
             : "question-then-documents";
}

PromptOrder ParsePromptOrder(std::string_view name) {
  if (name == "documents-then-question") {
    return PromptOrder::kDocumentsThenQuestion;
  }
  if (name == "question-then-documents") {
    return PromptOrder::kQuestionThenDocuments;
  }
  throw Error(ErrorKind::kConfig, "unknown prompt order '" + std::string(name) +
                                      "'");
}

PromptTemplate PromptTemplate::Builtin() {
  return FromText(kBuiltinPromptTemplate);
}

PromptTemplate PromptTemplate::FromFile(const std::string& path) {
  return FromText(ReadFile(path));
}

PromptTemplate PromptTemplate::FromText(std::string text) {
  for (auto p : {kContext, kQuestion, kChoices}) {
    if (CountOf(text, p) != 1) {
      throw Error(ErrorKind::kConfig, "prompt template must contain " +
                                          std::string(p) + " exactly once");
    }
  }
  for (std::string_view line : Split(text, '\n')) {
    const bool has_context = line.find(kContext) != std::string_view::npos;
    const bool has_question = line.find(kQuestion) != std::string_view::npos;
    if (has_context && has_question) {
      throw Error(ErrorKind::kConfig,
                  "{context} and {question} must be on separate lines");
    }
  }
  PromptTemplate t;
  t.text_ = std::move(text);
  return t;
}

PromptText PromptTemplate::Render(const QAItem& item,
                                  std::span<const std::string> context,
                                  PromptOrder order) const {
  std::vector<std::string> lines;
  for (std::string_view l : Split(text_, '\n')) lines.emplace_back(l);
  size_t context_line = 0;
  size_t question_line = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find(kContext) != std::string::npos) context_line = i;
    if (lines[i].find(kQuestion) != std::string::npos) question_line = i;
  }
  if (order == PromptOrder::kQuestionThenDocuments) {
    std::swap(lines[context_line], lines[question_line]);
    std::swap(context_line, question_line);
  }

  std::string context_block;
  for (size_t i = 0; i < context.size(); ++i) {
    if (i > 0) context_block += '\n';
    context_block += context[i];
  }
  std::string choices_block;
  for (size_t i = 0; i < item.choices.size(); ++i) {
    if (i > 0) choices_block += '\n';
    choices_block += item.choices[i].label;
    choices_block += ". ";
    choices_block += item.choices[i].text;
  }

  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (i == context_line && context.empty() && Trim(line) == kContext) {
      continue;  // drop the line and its newline
    }
    ReplaceOnce(line, kContext, context_block);
    ReplaceOnce(line, kQuestion, item.stem);
    ReplaceOnce(line, kChoices, choices_block);
    out += line;
    if (i + 1 < lines.size()) out += '\n';
  }
  return PromptText{item.id, std::move(out),
                    std::vector<std::string>(context.begin(), context.end())};
}

}  // namespace kgwalk
