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

#include <gtest/gtest.h>

#include <algorithm>

#include "common/error.h"
#include "common/text.h"
#include "eval/qa_item.h"
#include "prompt/context.h"
#include "prompt/template.h"
#include "support/test_support.h"

namespace kgwalk {
namespace {

QAItem FirstItem() { return LoadDataset(testing::DataPath("csqa20.jsonl"))[0]; }

std::vector<std::string> Lines(const std::string& s) {
  std::vector<std::string> out;
  for (std::string_view l : Split(s, '\n')) out.emplace_back(l);
  return out;
}

TEST(PromptTemplate, GoldenDocumentsThenQuestion) {
  std::vector<std::string> ctx = {"beer is a alcohol", "alcohol causes sleep"};
  PromptText p = PromptTemplate::Builtin().Render(FirstItem(), ctx,
                                                  PromptOrder::kDocumentsThenQuestion);
  EXPECT_EQ(p.text, ReadFile(testing::DataPath("golden_prompt_q01.txt")));
  EXPECT_EQ(p.item_id, "q01");
  EXPECT_EQ(p.context_sentences, ctx);
}

TEST(PromptTemplate, BaselineHasOnlyQuestionAndChoices) {
  PromptText p = PromptTemplate::Builtin().Render(FirstItem(), {},
                                                  PromptOrder::kDocumentsThenQuestion);
  EXPECT_EQ(p.text,
            "What can happen if you drink too much liquor?\nA. dance\nB. sleep\n"
            "C. fly\nD. sing\nE. swim\nAnswer:\n");
}

TEST(PromptTemplate, OrdersShareTheSameLines) {
  std::vector<std::string> ctx = {"s one", "s two", "s three"};
  auto t = PromptTemplate::Builtin();
  PromptText a = t.Render(FirstItem(), ctx, PromptOrder::kDocumentsThenQuestion);
  PromptText b = t.Render(FirstItem(), ctx, PromptOrder::kQuestionThenDocuments);
  EXPECT_NE(a.text, b.text);
  auto la = Lines(a.text), lb = Lines(b.text);
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  EXPECT_EQ(la, lb);
  EXPECT_EQ(Lines(b.text)[0], "What can happen if you drink too much liquor?");
  EXPECT_EQ(Lines(b.text)[1], "s one");
}

TEST(PromptTemplate, ContextLineCountEqualsContextSize) {
  auto t = PromptTemplate::Builtin();
  const size_t base = Lines(t.Render(FirstItem(), {}, PromptOrder::kDocumentsThenQuestion).text).size();
  for (size_t k = 0; k < 5; ++k) {
    std::vector<std::string> ctx(k, "a sentence");
    auto p = t.Render(FirstItem(), ctx, PromptOrder::kDocumentsThenQuestion);
    EXPECT_EQ(Lines(p.text).size(), base + k);
  }
}

TEST(PromptTemplate, ValidatesPlaceholders) {
  EXPECT_THROW(PromptTemplate::FromText("{question}\n{choices}\n"), Error);
  EXPECT_THROW(PromptTemplate::FromText("{context}{question}\n{choices}\n"), Error);
  EXPECT_THROW(PromptTemplate::FromText("{context}\n{question}\n{question}\n{choices}\n"), Error);
  auto custom = PromptTemplate::FromText("Facts:\n{context}\nQ: {question}\n{choices}\n");
  auto p = custom.Render(FirstItem(), std::vector<std::string>{"x"},
                         PromptOrder::kDocumentsThenQuestion);
  EXPECT_EQ(p.text.substr(0, 10), "Facts:\nx\nQ");
}

TEST(ExperimentSetting, Validation) {
  ExperimentSetting s;
  s.regime = Regime::kBaseline;
  EXPECT_NO_THROW(s.Validate());
  s.k = 1;
  EXPECT_THROW(s.Validate(), Error);

  ExperimentSetting q;
  q.regime = Regime::kQgi;
  q.shape = ChainShape::Parse("4->1,1->2");
  q.k = 3;
  EXPECT_NO_THROW(q.Validate());
  q.k = 2;
  EXPECT_THROW(q.Validate(), Error);

  ExperimentSetting g;
  g.regime = Regime::kGraphInferenceOnly;
  g.k = 2;
  EXPECT_THROW(g.Validate(), Error);  // needs a shape
  g.shape = ChainShape::Parse("1->2,4->1");
  EXPECT_NO_THROW(g.Validate());
  EXPECT_EQ(g.EffectiveDirection(), DirectionMode::kIrregular);
  EXPECT_EQ(g.ChainPermutation(), (std::vector<size_t>{1, 0}));

  ExperimentSetting r;
  r.regime = Regime::kRelevantInfoOnly;
  r.k = 2;
  r.shape = ChainShape::Parse("1->2");
  EXPECT_THROW(r.Validate(), Error);
}

TEST(Regime, NamesRoundTrip) {
  for (Regime r : {Regime::kBaseline, Regime::kRelevantInfoOnly, Regime::kIrrelevantInfoOnly,
                   Regime::kGraphInferenceOnly, Regime::kKgi, Regime::kQgi}) {
    EXPECT_EQ(ParseRegime(RegimeName(r)), r);
  }
  EXPECT_THROW(ParseRegime("rag"), Error);
  EXPECT_EQ(ParsePromptOrder("question-then-documents"), PromptOrder::kQuestionThenDocuments);
}

}  // namespace
}  // namespace kgwalk
