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

#ifndef KGWALK_RUN_RUNNER_H_
#define KGWALK_RUN_RUNNER_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eval/scorer.h"
#include "run/config.h"

namespace kgwalk {

using LogFn = std::function<void(const std::string&)>;

struct RunOutcome {
  AccuracySummary summary;
  std::string config_digest;
  std::string output_dir;
  size_t generated = 0;  // requests sent this invocation
  size_t resumed = 0;    // items taken from an existing journal
  size_t failed = 0;     // error-flagged items
  size_t short_contexts = 0;
};

// Output files, all inside the output directory.
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kJournalFile[] = "journal.jsonl";
inline constexpr char kResultsFile[] = "results.jsonl";
inline constexpr char kSummaryFile[] = "summary.json";
inline constexpr char kPromptsFile[] = "prompts.jsonl";
inline constexpr char kChainsFile[] = "chains.jsonl";

// build_context -> render_prompt -> generate -> score for every item.
//
// Everything the regime needs is loaded and checked before the first
// request. An existing journal in the output directory is resumed: its items
// are not regenerated, provided the manifest digest and each prompt hash
// still match (Error(kConfig) otherwise). Journal lines are appended in
// dataset order, so an interrupted run resumes into the same bytes.
RunOutcome RunExperiment(const ExperimentConfig& config,
                         const std::string& output_dir_override = "",
                         const LogFn& log = nullptr);

struct ScoreOutcome {
  AccuracySummary summary;
  std::vector<Verdict> verdicts;
  std::string summary_json;
};

// Re-scores a finished journal against the dataset. Every dataset item must
// have exactly one journal entry and vice versa (Error(kData) naming the
// id). The digest is taken from manifest.json beside the journal if present.
ScoreOutcome ScoreJournal(const std::string& journal_path,
                          const std::string& dataset_path);

// Tab-separated table, one row per run directory:
// name, regime, k, shape, order, relevance, n, accuracy, errors, digest.
std::string ReportRuns(const std::vector<std::string>& run_dirs);

}  // namespace kgwalk

#endif  // KGWALK_RUN_RUNNER_H_
