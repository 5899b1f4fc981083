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

#include "run/runner.h"

#include <filesystem>
#include <map>
#include <sstream>
#include <unordered_map>

#include "common/error.h"
#include "common/hash.h"
#include "common/text.h"
#include "kg/conceptnet.h"
#include "llm/batch.h"
#include "prompt/template.h"
#include "run/journal.h"
#include "verbalize/verbalizer.h"

namespace kgwalk {
namespace {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

// Missing inputs named by the config are configuration problems.
template <typename F>
auto AsConfigError(const std::string& what, F&& load) {
  try {
    return load();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) {
      throw Error(ErrorKind::kConfig, what + ": " + e.what());
    }
    throw;
  }
}

std::optional<EmbeddingIndex> MaybeLoadIndex(const std::string& path,
                                             bool mmap, const char* what) {
  if (path.empty()) return std::nullopt;
  return AsConfigError(std::string(what) + " vectors", [&] {
    return EmbeddingIndex::Load(path, mmap ? IndexLoadMode::kMapped
                                           : IndexLoadMode::kInMemory);
  });
}

std::string ManifestJson(const ExperimentConfig& c) {
  OrderedJson m;
  m["schema"] = "kgwalk.manifest/1";
  m["config_digest"] = c.digest;
  m["seed"] = c.seed;
  m["dataset"] = c.normalized["dataset"];
  m["indexes"] = c.normalized["vectors"];
  m["journal"] = kJournalFile;
  m["config"] = c.normalized;
  return m.dump(2) + "\n";
}

std::string ChainLine(const std::string& item_id, const WalkChain& chain,
                      const KnowledgeGraph& g) {
  OrderedJson j;
  j["item_id"] = item_id;
  j["anchor"] = g.node(chain.anchor).label;
  OrderedJson steps = OrderedJson::array();
  for (const ChainStep& s : chain.steps) {
    const Triple& t = g.triple(s.triple);
    OrderedJson step;
    step["subject"] = g.node(t.subject).label;
    step["relation"] = g.relation(t.relation).name;
    step["object"] = g.node(t.object).label;
    step["position"] = EdgeName(s.edge);
    step["triple"] = s.triple;
    steps.push_back(step);
  }
  j["steps"] = steps;
  j["truncated"] = chain.truncated;
  j["seed"] = chain.seed;
  return j.dump() + "\n";
}

std::optional<std::string> ReadManifestDigest(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  nlohmann::json m = nlohmann::json::parse(ReadFile(path.string()), nullptr, false);
  if (m.is_discarded() || !m.contains("config_digest") ||
      !m["config_digest"].is_string()) {
    throw Error(ErrorKind::kData, path.string() + " is not a run manifest");
  }
  return m["config_digest"].get<std::string>();
}

}  // namespace

RunOutcome RunExperiment(const ExperimentConfig& config,
                         const std::string& output_dir_override,
                         const LogFn& log) {
  auto say = [&](const std::string& m) {
    if (log) log(m);
  };
  const std::string out_dir =
      output_dir_override.empty() ? config.output_dir : output_dir_override;
  if (out_dir.empty()) {
    throw Error(ErrorKind::kConfig, "no output directory (output_dir or --out)");
  }
  const ExperimentSetting& setting = config.setting;

  // Load and check everything before generating anything.
  std::vector<QAItem> items = AsConfigError("dataset", [&] {
    return LoadDataset(config.dataset);
  });
  if (config.limit > 0 && items.size() > config.limit) items.resize(config.limit);
  if (items.empty()) throw Error(ErrorKind::kData, "dataset has no items");

  std::optional<KnowledgeGraph> graph;
  if (!config.graph_dump.empty()) {
    IngestResult ingest = AsConfigError("graph", [&] {
      return IngestConceptNet(config.graph_dump,
                              IngestOptions{config.language, config.dedupe});
    });
    say("graph: " + std::to_string(ingest.report.nodes) + " nodes, " +
        std::to_string(ingest.report.triples) + " triples");
    graph = std::move(ingest.graph);
  }
  TemplateTable templates = AsConfigError("relation templates", [&] {
    return config.relation_templates.empty()
               ? TemplateTable::Builtin()
               : TemplateTable::FromFile(config.relation_templates);
  });
  std::optional<Verbalizer> verbalizer;
  if (graph) verbalizer.emplace(*graph, std::move(templates));
  const PromptTemplate prompt_template = AsConfigError("prompt template", [&] {
    return config.prompt_template.empty()
               ? PromptTemplate::Builtin()
               : PromptTemplate::FromFile(config.prompt_template);
  });

  auto nodes = MaybeLoadIndex(config.node_vectors, config.mmap, "node");
  auto sentences =
      MaybeLoadIndex(config.sentence_vectors, config.mmap, "sentence");
  auto questions =
      MaybeLoadIndex(config.question_vectors, config.mmap, "question");
  auto concepts = MaybeLoadIndex(config.concept_vectors, config.mmap, "concept");
  auto question_concepts = MaybeLoadIndex(config.question_concept_vectors,
                                          config.mmap, "question+concept");
  std::optional<DocumentStore> documents;
  if (!config.documents.empty()) {
    documents = AsConfigError("documents", [&] {
      return DocumentStore::Load(config.documents);
    });
  }

  ContextResources res;
  res.graph = graph ? &*graph : nullptr;
  res.verbalizer = verbalizer ? &*verbalizer : nullptr;
  res.node_vectors = nodes ? &*nodes : nullptr;
  res.sentence_vectors = sentences ? &*sentences : nullptr;
  res.documents = documents ? &*documents : nullptr;
  res.question_vectors = questions ? &*questions : nullptr;
  res.concept_vectors = concepts ? &*concepts : nullptr;
  res.question_concept_vectors = question_concepts ? &*question_concepts : nullptr;
  res.scan_threads = config.scan_threads;
  CheckResources(setting, res);

  std::unique_ptr<Backend> backend = AsConfigError("backend", [&] {
    return MakeBackend(config.backend);
  });

  // Output directory and resume state.
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + out_dir + ": " + ec.message());
  if (auto digest = ReadManifestDigest(dir / kManifestFile)) {
    if (*digest != config.digest) {
      throw Error(ErrorKind::kConfig,
                  out_dir + " holds a run with a different config digest (" +
                      *digest + "); use a fresh output directory");
    }
  }
  WriteFileAtomic((dir / kManifestFile).string(), ManifestJson(config));

  // Contexts and prompts.
  std::vector<PromptText> prompts;
  std::vector<std::string> hashes;
  std::string prompts_out;
  std::string chains_out;
  size_t short_contexts = 0;
  for (const QAItem& item : items) {
    const uint64_t seed = ItemSeed(config.seed, item.id);
    ContextResult ctx = BuildContext(setting, item, res, seed);
    if (ctx.truncated) {
      ++short_contexts;
      say("item " + item.id + ": " + ctx.note);
    }
    PromptText p = prompt_template.Render(item, ctx.sentences, setting.order);
    hashes.push_back(Sha256Hex(p.text));
    OrderedJson pj;
    pj["item_id"] = item.id;
    pj["prompt_hash"] = hashes.back();
    pj["prompt"] = p.text;
    pj["sources"] = ctx.sources;
    pj["truncated"] = ctx.truncated;
    pj["item_seed"] = seed;
    prompts_out += pj.dump() + "\n";
    if (ctx.chain && graph) chains_out += ChainLine(item.id, *ctx.chain, *graph);
    prompts.push_back(std::move(p));
  }
  WriteFileAtomic((dir / kPromptsFile).string(), prompts_out);
  if (!chains_out.empty()) {
    WriteFileAtomic((dir / kChainsFile).string(), chains_out);
  }

  // Resume from the journal, dropping a torn final line.
  const fs::path journal_path = dir / kJournalFile;
  std::unordered_map<std::string, JournalEntry> done;
  if (fs::exists(journal_path)) {
    const std::string contents = ReadFile(journal_path.string());
    size_t valid = 0;
    for (JournalEntry& e : ParseJournal(contents, true, &valid)) {
      const std::string id = e.item_id;
      if (!done.emplace(id, std::move(e)).second) {
        throw Error(ErrorKind::kData, "journal lists item " + id + " twice");
      }
    }
    if (valid != contents.size()) {
      fs::resize_file(journal_path, valid);
      say("journal: dropped a torn final line");
    }
  }
  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < items.size(); ++i) position.emplace(items[i].id, i);
  for (const auto& [id, e] : done) {
    auto it = position.find(id);
    if (it == position.end()) {
      throw Error(ErrorKind::kConfig, "journal item " + id + " is not in the dataset");
    }
    if (e.prompt_hash != hashes[it->second]) {
      throw Error(ErrorKind::kConfig, "journal prompt for item " + id +
                                          " differs from the current prompt");
    }
  }

  std::vector<GenRequest> requests;
  for (size_t i = 0; i < items.size(); ++i) {
    if (done.contains(items[i].id)) continue;
    requests.push_back(GenRequest{items[i].id, prompts[i].text,
                                  config.max_new_tokens, config.temperature});
  }
  RunOutcome outcome;
  outcome.resumed = done.size();
  outcome.generated = requests.size();
  outcome.short_contexts = short_contexts;
  outcome.config_digest = config.digest;
  outcome.output_dir = out_dir;
  if (!requests.empty()) {
    say("generating " + std::to_string(requests.size()) + " responses (" +
        std::to_string(outcome.resumed) + " resumed)");
  }

  JournalWriter journal(journal_path.string());
  const bool zero_latency = backend->deterministic();
  RunBatch(requests, *backend, config.parallelism,
           [&](size_t index, const BatchResult& r) {
             JournalEntry e;
             e.item_id = r.item_id;
             e.prompt_hash = hashes[position.at(r.item_id)];
             if (r.ok()) {
               e.text = r.response->text;
               e.latency_ms = zero_latency ? 0 : r.response->latency_ms;
               e.backend = r.response->backend;
             } else {
               e.backend = backend->name();
               e.error = r.error;
               say("item " + r.item_id + ": " + r.error);
             }
             journal.Append(e);
             done.emplace(e.item_id, e);
             (void)index;
           });

  // Score in dataset order.
  std::vector<Verdict> verdicts;
  std::string results_out;
  for (const QAItem& item : items) {
    const JournalEntry& e = done.at(item.id);
    Verdict v = e.failed() ? ErrorVerdict(item) : ScoreResponse(e.text, item);
    if (e.failed()) ++outcome.failed;
    results_out += ResultLine(v);
    verdicts.push_back(std::move(v));
  }
  outcome.summary = Accuracy(verdicts);
  WriteFileAtomic((dir / kResultsFile).string(), results_out);
  WriteFileAtomic((dir / kSummaryFile).string(),
                  SummaryJson(outcome.summary, config.digest));
  return outcome;
}

ScoreOutcome ScoreJournal(const std::string& journal_path,
                          const std::string& dataset_path) {
  const std::vector<QAItem> items = LoadDataset(dataset_path);
  const std::vector<JournalEntry> entries = ReadJournal(journal_path);
  std::unordered_map<std::string, const JournalEntry*> by_id;
  for (const JournalEntry& e : entries) {
    if (!by_id.emplace(e.item_id, &e).second) {
      throw Error(ErrorKind::kData, "journal lists item " + e.item_id + " twice");
    }
  }
  std::unordered_map<std::string, bool> in_dataset;
  for (const QAItem& item : items) in_dataset.emplace(item.id, true);
  for (const JournalEntry& e : entries) {
    if (!in_dataset.contains(e.item_id)) {
      throw Error(ErrorKind::kData,
                  "journal item " + e.item_id + " is not in the dataset");
    }
  }
  ScoreOutcome out;
  for (const QAItem& item : items) {
    auto it = by_id.find(item.id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::kData, "journal has no entry for item " + item.id);
    }
    const JournalEntry& e = *it->second;
    out.verdicts.push_back(e.failed() ? ErrorVerdict(item)
                                      : ScoreResponse(e.text, item));
  }
  if (out.verdicts.empty()) throw Error(ErrorKind::kData, "dataset has no items");
  out.summary = Accuracy(out.verdicts);
  const fs::path manifest = fs::path(journal_path).parent_path() / kManifestFile;
  const std::string digest = ReadManifestDigest(manifest).value_or("");
  out.summary_json = SummaryJson(out.summary, digest);
  return out;
}

std::string ReportRuns(const std::vector<std::string>& run_dirs) {
  std::ostringstream out;
  out << "name\tregime\tk\tshape\torder\trelevance\tn\taccuracy\terrors\tdigest\n";
  for (const std::string& d : run_dirs) {
    const fs::path dir(d);
    nlohmann::json manifest =
        nlohmann::json::parse(ReadFile((dir / kManifestFile).string()), nullptr, false);
    nlohmann::json summary =
        nlohmann::json::parse(ReadFile((dir / kSummaryFile).string()), nullptr, false);
    if (manifest.is_discarded() || summary.is_discarded() ||
        !manifest.contains("config") || !summary.contains("accuracy")) {
      throw Error(ErrorKind::kData, d + ": missing or invalid manifest/summary");
    }
    const auto& c = manifest["config"];
    char acc[32];
    std::snprintf(acc, sizeof(acc), "%.4f", summary["accuracy"].get<double>());
    out << c.value("name", "") << '\t' << c.value("regime", "") << '\t'
        << c.value("k", 0) << '\t' << c.value("shape", "") << '\t'
        << c.value("order", "") << '\t' << c.value("relevance", "") << '\t'
        << summary.value("n", 0) << '\t' << acc << '\t'
        << summary.value("errors", 0) << '\t'
        << manifest.value("config_digest", "").substr(0, 12) << '\n';
  }
  return out.str();
}

}  // namespace kgwalk
