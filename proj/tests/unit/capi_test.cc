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

// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "kgwalk/kgwalk.h"

namespace {

std::string Data(const char* name) {
  return std::string(KGWALK_TEST_DATA_DIR) + "/" + name;
}

TEST(CApi, IngestAndAdjacency) {
  kgw_graph* g = nullptr;
  kgw_ingest_report r{};
  ASSERT_EQ(kgw_graph_ingest(Data("alcohol_graph.csv").c_str(), "en", 0, &g, &r), KGW_OK)
      << kgw_last_error();
  EXPECT_EQ(r.triples, 16u);
  EXPECT_EQ(kgw_graph_triple_count(g), 16u);
  uint32_t alcohol = 0;
  ASSERT_EQ(kgw_graph_find_node(g, "Alcohol", &alcohol), KGW_OK);
  EXPECT_STREQ(kgw_graph_node_label(g, alcohol), "alcohol");
  const uint64_t* out = nullptr;
  size_t n_out = 0, n_in = 0;
  const uint64_t* in = nullptr;
  ASSERT_EQ(kgw_graph_outbound(g, alcohol, &out, &n_out), KGW_OK);
  ASSERT_EQ(kgw_graph_inbound(g, alcohol, &in, &n_in), KGW_OK);
  EXPECT_EQ(n_out, 6u);
  EXPECT_EQ(n_in, 2u);
  kgw_triple t{};
  ASSERT_EQ(kgw_graph_triple(g, out[0], &t), KGW_OK);
  EXPECT_STREQ(kgw_graph_relation_name(g, t.relation), "Causes");
  char* sentence = nullptr;
  ASSERT_EQ(kgw_graph_verbalize(g, nullptr, out[0], &sentence), KGW_OK);
  EXPECT_STREQ(sentence, "alcohol causes sleep");
  kgw_string_free(sentence);

  uint32_t none = 0;
  EXPECT_EQ(kgw_graph_find_node(g, "liquor", &none), KGW_ERR_NOT_FOUND);
  EXPECT_NE(std::string(kgw_last_error()).find("liquor"), std::string::npos);
  EXPECT_EQ(kgw_graph_outbound(g, 9999, &out, &n_out), KGW_ERR_NOT_FOUND);
  kgw_graph_free(g);
}

TEST(CApi, ErrorCodes) {
  kgw_graph* g = nullptr;
  EXPECT_EQ(kgw_graph_ingest("/nonexistent.csv", "en", 0, &g, nullptr), KGW_ERR_IO);
  EXPECT_EQ(g, nullptr);
  EXPECT_EQ(kgw_graph_ingest(Data("conceptnet_small.csv").c_str(), "de", 0, &g, nullptr),
            KGW_ERR_DATA);
  EXPECT_NE(std::string(kgw_last_error()).find("zero triples"), std::string::npos);
  EXPECT_EQ(kgw_graph_ingest(nullptr, "en", 0, &g, nullptr), KGW_ERR_INVALID_ARGUMENT);
  kgw_run_summary s{};
  EXPECT_EQ(kgw_run_experiment("/nonexistent/config.json", nullptr, nullptr, nullptr, &s),
            KGW_ERR_CONFIG);
  kgw_index* idx = nullptr;
  EXPECT_EQ(kgw_index_load(Data("csqa20.jsonl").c_str(), 0, &idx), KGW_ERR_DATA);
}

TEST(CApi, CosineAndScoring) {
  float a[] = {1, 2, 3}, b[] = {-1, -2, -3};
  double c = 0;
  ASSERT_EQ(kgw_cosine(a, a, 3, &c), KGW_OK);
  EXPECT_NEAR(c, 1.0, 1e-6);
  ASSERT_EQ(kgw_cosine(a, b, 3, &c), KGW_OK);
  EXPECT_NEAR(c, -1.0, 1e-6);
  float z[] = {0, 0, 0};
  EXPECT_EQ(kgw_cosine(a, z, 3, &c), KGW_ERR_DATA);

  const char* item =
      R"({"id":"q17","answerKey":"B","question":{"stem":"s","question_concept":"c",)"
      R"("choices":[{"label":"A","text":"television"},{"label":"B","text":"exercise"}]}})";
  int correct = -1;
  const char* reason = nullptr;
  ASSERT_EQ(kgw_score_response(item, "X. exercise", &correct, &reason), KGW_OK);
  EXPECT_EQ(correct, 1);
  EXPECT_STREQ(reason, "text-match");
  ASSERT_EQ(kgw_score_response(item, "A. exercise", &correct, &reason), KGW_OK);
  EXPECT_EQ(correct, 0);
  EXPECT_STREQ(reason, "wrong-letter");
}

TEST(CApi, VersionString) {
  EXPECT_STREQ(kgw_version(), "0.1.0");
}

}  // namespace
