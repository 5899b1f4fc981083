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

// kgwalk: command-line front end over the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgwalk/kgwalk.h"

namespace {

// 0 ok, 1 usage/config, 2 data, 3 backend.
int ExitCode(kgw_status s) {
  switch (s) {
    case KGW_OK: return 0;
    case KGW_ERR_CONFIG:
    case KGW_ERR_INVALID_ARGUMENT: return 1;
    case KGW_ERR_BACKEND: return 3;
    default: return 2;
  }
}

int Report(kgw_status s) {
  if (s != KGW_OK) std::fprintf(stderr, "kgwalk: %s\n", kgw_last_error());
  return ExitCode(s);
}

void Log(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

struct IngestArgs {
  std::string dump;
  std::string language = "en";
  bool dedupe = false;
};

int Ingest(const IngestArgs& a, bool quiet, kgw_graph** out) {
  kgw_ingest_report r{};
  kgw_status s = kgw_graph_ingest(a.dump.c_str(), a.language.c_str(),
                                  a.dedupe ? 1 : 0, out, &r);
  if (s != KGW_OK) return Report(s);
  if (!quiet) {
    std::printf(
        "lines\t%llu\nnodes\t%llu\ntriples\t%llu\nrelations\t%llu\n"
        "skipped\t%llu\nfiltered\t%llu\nduplicates\t%llu\n",
        (unsigned long long)r.lines, (unsigned long long)r.nodes,
        (unsigned long long)r.triples, (unsigned long long)r.relations,
        (unsigned long long)r.skipped, (unsigned long long)r.filtered,
        (unsigned long long)r.duplicates);
  }
  return 0;
}

void AddIngestOptions(CLI::App* cmd, IngestArgs* a) {
  cmd->add_option("--dump", a->dump, "ConceptNet assertions (.csv or .csv.gz)")
      ->required();
  cmd->add_option("--language", a->language, "two-letter language code");
  cmd->add_flag("--dedup", a->dedupe, "drop repeated (subject, relation, object)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgwalk: knowledge-graph walks as LLM prompt context"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kgw_version()));

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "load a dump and print counts");
  AddIngestOptions(ingest, &ingest_args);

  IngestArgs export_args;
  std::string export_out, export_kind = "sentences", export_templates;
  auto* exp = app.add_subcommand("export-texts",
                                 "write texts for the embedder");
  AddIngestOptions(exp, &export_args);
  exp->add_option("--out", export_out, "output file")->required();
  exp->add_option("--kind", export_kind, "sentences or nodes")
      ->check(CLI::IsMember({"sentences", "nodes"}));
  exp->add_option("--templates", export_templates, "relation template TSV");

  std::string run_config, run_out;
  bool run_quiet = false;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", run_config, "experiment config (JSON)")->required();
  run->add_option("--out", run_out, "output directory (overrides the config)");
  run->add_flag("-q,--quiet", run_quiet, "no progress messages");

  std::string score_journal, score_dataset, score_out;
  auto* score = app.add_subcommand("score", "re-score a journal");
  score->add_option("--journal", score_journal, "journal.jsonl")->required();
  score->add_option("--dataset", score_dataset, "dataset JSON-lines")->required();
  score->add_option("--out", score_out, "write results and summary here");

  std::vector<std::string> report_dirs;
  auto* report = app.add_subcommand("report", "compare finished runs");
  report->add_option("dirs", report_dirs, "run directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*ingest) {
    kgw_graph* g = nullptr;
    int code = Ingest(ingest_args, false, &g);
    kgw_graph_free(g);
    return code;
  }
  if (*exp) {
    kgw_graph* g = nullptr;
    int code = Ingest(export_args, true, &g);
    if (code != 0) return code;
    uint64_t n = 0;
    kgw_status s =
        export_kind == "nodes"
            ? kgw_graph_export_nodes(g, export_out.c_str(), &n)
            : kgw_graph_export_sentences(
                  g, export_templates.empty() ? nullptr : export_templates.c_str(),
                  export_out.c_str(), &n);
    kgw_graph_free(g);
    if (s != KGW_OK) return Report(s);
    std::printf("%llu %s written to %s\n", (unsigned long long)n,
                export_kind.c_str(), export_out.c_str());
    return 0;
  }
  if (*run) {
    kgw_run_summary sum{};
    kgw_status s = kgw_run_experiment(run_config.c_str(),
                                      run_out.empty() ? nullptr : run_out.c_str(),
                                      run_quiet ? nullptr : Log, nullptr, &sum);
    if (s != KGW_OK) return Report(s);
    std::printf("n=%llu correct=%llu errors=%llu accuracy=%.4f\n",
                (unsigned long long)sum.n, (unsigned long long)sum.correct,
                (unsigned long long)sum.errors, sum.accuracy);
    // Nothing answered at all means the backend is down, not the model wrong.
    if (sum.n > 0 && sum.errors == sum.n) {
      std::fprintf(stderr, "kgwalk: every item failed at the backend\n");
      return 3;
    }
    return 0;
  }
  if (*score) {
    char* json = nullptr;
    kgw_status s = kgw_score_journal(score_journal.c_str(), score_dataset.c_str(),
                                     score_out.empty() ? nullptr : score_out.c_str(),
                                     &json);
    if (s != KGW_OK) return Report(s);
    std::fputs(json, stdout);
    kgw_string_free(json);
    return 0;
  }
  if (*report) {
    std::vector<const char*> dirs;
    for (const auto& d : report_dirs) dirs.push_back(d.c_str());
    char* table = nullptr;
    kgw_status s = kgw_report_table(dirs.data(), dirs.size(), &table);
    if (s != KGW_OK) return Report(s);
    std::fputs(table, stdout);
    kgw_string_free(table);
    return 0;
  }
  return 1;
}
