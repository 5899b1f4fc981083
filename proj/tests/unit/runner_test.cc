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

#include <filesystem>

#include "common/error.h"
#include "common/text.h"
#include "json.hpp"
#include "run/config.h"
#include "run/journal.h"
#include "run/runner.h"
#include "support/test_support.h"

namespace kgwalk {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

nlohmann::json BaseConfig(const testing::RunFixture& f) {
  return {
      {"name", "test"},
      {"regime", "baseline"},
      {"seed", 42},
      {"dataset", f.dataset},
      {"backend", {{"kind", "replay"}, {"path", f.replay}}},
  };
}

nlohmann::json KgiConfig(const testing::RunFixture& f) {
  nlohmann::json c = BaseConfig(f);
  c["regime"] = "qgi";
  c["shape"] = "4->1,1->2";
  c["graph"] = {{"dump", f.dump}};
  c["vectors"] = {{"nodes", f.nodes},
                  {"sentences", f.sentences},
                  {"question", f.question},
                  {"concept", f.concepts},
                  {"question_concept", f.question_concept}};
  return c;
}

std::string Slurp(const std::string& dir, const char* name) {
  return ReadFile((fs::path(dir) / name).string());
}

size_t CountLines(const std::string& s) {
  return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
}

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override { fixture_ = testing::MakeRunFixture(dir_.path().string()); }
  RunOutcome Run(const nlohmann::json& config, const std::string& out) {
    return RunExperiment(ParseConfig(config, ""), out);
  }
  std::string Out(const char* name) { return dir_.file(name); }

  TempDir dir_;
  testing::RunFixture fixture_;
};

TEST_F(RunnerTest, BaselineReplayAccuracy) {
  RunOutcome r = Run(BaseConfig(fixture_), Out("base"));
  EXPECT_EQ(r.summary.n, 20u);
  EXPECT_EQ(r.summary.correct, 11u);
  EXPECT_DOUBLE_EQ(r.summary.accuracy, 11.0 / 20.0);
  EXPECT_EQ(r.generated, 20u);
  auto summary = nlohmann::json::parse(Slurp(Out("base"), kSummaryFile));
  EXPECT_DOUBLE_EQ(summary["accuracy"].get<double>(), 0.55);
  EXPECT_EQ(summary["config_digest"], ParseConfig(BaseConfig(fixture_), "").digest);
  EXPECT_EQ(CountLines(Slurp(Out("base"), kResultsFile)), 20u);
  // No context lines: first prompt line is the question stem.
  auto first = nlohmann::json::parse(Split(Slurp(Out("base"), kPromptsFile), '\n')[0]);
  EXPECT_EQ(first["prompt"].get<std::string>().rfind("What can happen", 0), 0u);
  EXPECT_FALSE(fs::exists(fs::path(Out("base")) / kChainsFile));
}

TEST_F(RunnerTest, QgiRunIsByteIdenticalAcrossRunsAndParallelism) {
  nlohmann::json c = KgiConfig(fixture_);
  Run(c, Out("a"));
  c["parallelism"] = 8;
  Run(c, Out("b"));
  for (const char* f : {kJournalFile, kSummaryFile, kResultsFile, kPromptsFile,
                        kChainsFile, kManifestFile}) {
    EXPECT_EQ(Slurp(Out("a"), f), Slurp(Out("b"), f)) << f;
  }
  // Three context sentences per prompt unless the chain came up short.
  const std::string prompts = Slurp(Out("a"), kPromptsFile);
  for (std::string_view line : Split(prompts, '\n')) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    if (!j["truncated"].get<bool>()) EXPECT_EQ(j["sources"].size(), 3u);
  }
}

TEST_F(RunnerTest, ResumesFromPartialJournal) {
  nlohmann::json c = KgiConfig(fixture_);
  Run(c, Out("full"));
  const std::string full = Slurp(Out("full"), kJournalFile);

  Run(c, Out("partial"));
  const auto lines = Split(full, '\n');
  std::string head;
  for (size_t i = 0; i < 7; ++i) head += std::string(lines[i]) + "\n";
  head += std::string(lines[7]).substr(0, 10);  // torn write
  testing::WriteText((fs::path(Out("partial")) / kJournalFile).string(), head);

  RunOutcome r = Run(c, Out("partial"));
  EXPECT_EQ(r.resumed, 7u);
  EXPECT_EQ(r.generated, 13u);
  EXPECT_EQ(Slurp(Out("partial"), kJournalFile), full);
  EXPECT_EQ(Slurp(Out("partial"), kSummaryFile), Slurp(Out("full"), kSummaryFile));

  RunOutcome again = Run(c, Out("partial"));
  EXPECT_EQ(again.generated, 0u);
  EXPECT_EQ(again.resumed, 20u);
}

TEST_F(RunnerTest, RefusesADirectoryFromAnotherConfig) {
  Run(BaseConfig(fixture_), Out("x"));
  nlohmann::json other = BaseConfig(fixture_);
  other["seed"] = 7;
  try {
    Run(other, Out("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST_F(RunnerTest, MissingInputsFailBeforeGeneration) {
  nlohmann::json c = KgiConfig(fixture_);
  c["vectors"]["nodes"] = dir_.file("missing.kgwv");
  try {
    Run(c, Out("m"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  EXPECT_FALSE(fs::exists(fs::path(Out("m")) / kJournalFile));

  nlohmann::json n = KgiConfig(fixture_);
  n["vectors"].erase("nodes");
  EXPECT_THROW(Run(n, Out("n")), Error);
}

TEST_F(RunnerTest, BackendFailuresAreFlaggedPerItem) {
  nlohmann::json c = BaseConfig(fixture_);
  c["backend"] = {{"kind", "http"},
                  {"url", "http://127.0.0.1:1/gen"},
                  {"max_attempts", 1},
                  {"timeout_ms", 200}};
  c["limit"] = 3;
  RunOutcome r = Run(c, Out("h"));
  EXPECT_EQ(r.summary.n, 3u);
  EXPECT_EQ(r.summary.errors, 3u);
  EXPECT_EQ(r.failed, 3u);
  EXPECT_EQ(r.summary.reason_histogram["error-flagged"], 3u);
}

TEST_F(RunnerTest, ScoreJournalRescoresAndDetectsMismatch) {
  Run(BaseConfig(fixture_), Out("s"));
  const std::string journal = (fs::path(Out("s")) / kJournalFile).string();
  ScoreOutcome same = ScoreJournal(journal, fixture_.dataset);
  EXPECT_EQ(same.summary_json, Slurp(Out("s"), kSummaryFile));

  // Flip q19 ("E", wrong) to the right letter: +1/20.
  std::string text = ReadFile(journal);
  const size_t at = text.find("\"item_id\":\"q19\"");
  ASSERT_NE(at, std::string::npos);
  const size_t t = text.find("\"text\":\"E\"", at);
  ASSERT_NE(t, std::string::npos);
  text.replace(t, 10, "\"text\":\"A\"");
  testing::WriteText(journal, text);
  ScoreOutcome flipped = ScoreJournal(journal, fixture_.dataset);
  // Exact in rationals: one more correct out of the same 20.
  EXPECT_EQ(flipped.summary.n, same.summary.n);
  EXPECT_EQ(flipped.summary.correct, same.summary.correct + 1);
  EXPECT_EQ(flipped.summary.accuracy, 12.0 / 20.0);
  EXPECT_NEAR(flipped.summary.accuracy - same.summary.accuracy, 1.0 / 20.0, 1e-12);

  // Drop one item.
  std::string dropped;
  for (std::string_view line : Split(text, '\n')) {
    if (!line.empty() && line.find("\"q05\"") == std::string_view::npos) {
      dropped += std::string(line) + "\n";
    }
  }
  testing::WriteText(journal, dropped);
  try {
    ScoreJournal(journal, fixture_.dataset);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("q05"), std::string::npos);
  }
}

TEST_F(RunnerTest, ReportTable) {
  Run(BaseConfig(fixture_), Out("r1"));
  Run(KgiConfig(fixture_), Out("r2"));
  const std::string table = ReportRuns({Out("r1"), Out("r2")});
  auto rows = Split(table, '\n');
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(rows[0].substr(0, 11), "name\tregime");
  EXPECT_NE(rows[1].find("baseline"), std::string_view::npos);
  EXPECT_NE(rows[1].find("0.5500"), std::string_view::npos);
  EXPECT_NE(rows[2].find("qgi"), std::string_view::npos);
}

TEST(Config, DigestTracksBehaviourFields) {
  TempDir dir;
  testing::WriteText(dir.file("prompt.txt"), "{context}\n{question}\n{choices}\n");
  const nlohmann::json base = {
      {"regime", "kgi"}, {"shape", "4->1,1->2"}, {"seed", 1},
      {"dataset", "d.jsonl"}, {"graph", {{"dump", "g.csv"}}},
      {"backend", {{"kind", "mock"}, {"text", "A"}}}};
  const std::string d0 = ParseConfig(base, dir.path().string()).digest;
  std::vector<nlohmann::json> variants;
  auto with = [&](auto&& edit) {
    nlohmann::json c = base;
    edit(c);
    variants.push_back(c);
  };
  with([](auto& c) { c["seed"] = 2; });
  with([](auto& c) { c["shape"] = "1->2,4->1"; });
  with([](auto& c) { c["order"] = "question-then-documents"; });
  with([](auto& c) { c["anchor_query"] = "concept+question"; });
  with([](auto& c) { c["max_reseeds"] = 3; });
  with([](auto& c) { c["dataset"] = "other.jsonl"; });
  with([](auto& c) { c["graph"]["dedupe"] = true; });
  with([](auto& c) { c["graph"]["language"] = "fr"; });
  with([](auto& c) { c["backend"]["text"] = "B"; });
  with([](auto& c) { c["generation"] = {{"max_new_tokens", 5}}; });
  with([](auto& c) { c["generation"] = {{"temperature", 0.7}}; });
  with([](auto& c) { c["limit"] = 4; });
  with([](auto& c) { c["prompt_template"] = "prompt.txt"; });
  with([](auto& c) { c["direction"] = "irregular"; });
  with([](auto& c) { c["vectors"] = {{"mmap", true}}; });
  std::set<std::string> digests = {d0};
  for (const auto& v : variants) digests.insert(ParseConfig(v, dir.path().string()).digest);
  EXPECT_EQ(digests.size(), variants.size() + 1);

  nlohmann::json same = base;
  same["parallelism"] = 16;
  same["output_dir"] = "elsewhere";
  EXPECT_EQ(ParseConfig(same, dir.path().string()).digest, d0);
}

TEST(Config, Errors) {
  auto err = [](const nlohmann::json& c) {
    try {
      ParseConfig(c, "");
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig) << e.what();
      return std::string(e.what());
    }
    return std::string();
  };
  const nlohmann::json ok = {{"dataset", "d"}, {"backend", {{"kind", "mock"}}}};
  EXPECT_EQ(err(ok), "");
  nlohmann::json c = ok;
  c["typo_field"] = 1;
  EXPECT_NE(err(c).find("typo_field"), std::string::npos);
  c = ok;
  c.erase("dataset");
  EXPECT_NE(err(c), "");
  c = ok;
  c["regime"] = "kgi";
  c["shape"] = "1->2";
  EXPECT_NE(err(c).find("graph.dump"), std::string::npos);
  c = ok;
  c["k"] = 2;
  EXPECT_NE(err(c), "");
  c = ok;
  c["backend"] = {{"kind", "replay"}};
  EXPECT_NE(err(c), "");
  c = ok;
  c["prompt_template"] = "/nonexistent/template.txt";
  EXPECT_NE(err(c), "");
  EXPECT_THROW(LoadConfig("/nonexistent/config.json"), Error);
}

TEST(Journal, LinesRoundTripAndTornTail) {
  JournalEntry a{"q1", "h1", "B.\n", 0, "replay", ""};
  JournalEntry b{"q2", "h2", "", 12, "http", "HTTP 503"};
  const std::string text = JournalLine(a) + JournalLine(b);
  auto parsed = ParseJournal(text, false);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0].text, "B.\n");
  EXPECT_TRUE(parsed[1].failed());
  size_t valid = 0;
  auto partial = ParseJournal(text + "{\"item_id\":\"q3", true, &valid);
  EXPECT_EQ(partial.size(), 2u);
  EXPECT_EQ(valid, text.size());
  EXPECT_THROW(ParseJournal(text + "{\"item_id\":\"q3", false), Error);
}

}  // namespace
}  // namespace kgwalk
