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

#include "kgwalk/kgwalk.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "common/error.h"
#include "common/text.h"
#include "embed/index.h"
#include "eval/scorer.h"
#include "kg/conceptnet.h"
#include "run/config.h"
#include "run/journal.h"
#include "run/runner.h"
#include "verbalize/verbalizer.h"

struct kgw_graph {
  kgwalk::KnowledgeGraph graph;
};

struct kgw_index {
  kgwalk::EmbeddingIndex index;
  std::vector<std::string> ids;  // NUL-terminated copies for the C side
};

namespace {

thread_local std::string g_last_error;

kgw_status StatusFor(kgwalk::ErrorKind kind) {
  using kgwalk::ErrorKind;
  switch (kind) {
    case ErrorKind::kConfig: return KGW_ERR_CONFIG;
    case ErrorKind::kData: return KGW_ERR_DATA;
    case ErrorKind::kBackend: return KGW_ERR_BACKEND;
    case ErrorKind::kIo: return KGW_ERR_IO;
    case ErrorKind::kInvalidArgument: return KGW_ERR_INVALID_ARGUMENT;
    case ErrorKind::kNotFound: return KGW_ERR_NOT_FOUND;
    case ErrorKind::kInternal: return KGW_ERR_INTERNAL;
  }
  return KGW_ERR_INTERNAL;
}

kgw_status Fail(kgw_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
kgw_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return KGW_OK;
  } catch (const kgwalk::Error& e) {
    return Fail(StatusFor(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(KGW_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(KGW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(KGW_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(KGW_ERR_INTERNAL, "unknown exception");
  }
}

void Require(bool ok, const char* what) {
  if (!ok) {
    throw kgwalk::Error(kgwalk::ErrorKind::kInvalidArgument,
                        std::string(what) + " is null");
  }
}

char* Dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

kgwalk::TemplateTable Templates(const char* path) {
  return path == nullptr ? kgwalk::TemplateTable::Builtin()
                         : kgwalk::TemplateTable::FromFile(path);
}

kgw_status Adjacent(const kgw_graph* g, uint32_t node, bool out,
                    const uint64_t** triples, size_t* count) {
  return Guard([&] {
    Require(g && triples && count, "argument");
    auto span = out ? g->graph.outbound(node) : g->graph.inbound(node);
    static_assert(sizeof(kgwalk::TripleIndex) == sizeof(uint64_t));
    *triples = span.data();
    *count = span.size();
  });
}

}  // namespace

extern "C" {

KGW_API const char* kgw_last_error(void) { return g_last_error.c_str(); }

KGW_API const char* kgw_version(void) { return "0.1.0"; }

KGW_API void kgw_string_free(char* s) { std::free(s); }

KGW_API kgw_status kgw_graph_ingest(const char* path, const char* language,
                                    int dedupe, kgw_graph** out,
                                    kgw_ingest_report* report) {
  return Guard([&] {
    Require(path && out, "argument");
    *out = nullptr;
    kgwalk::IngestOptions options;
    if (language != nullptr) options.language = language;
    options.dedupe = dedupe != 0;
    kgwalk::IngestResult r = kgwalk::IngestConceptNet(path, options);
    if (report != nullptr) {
      report->lines = r.report.lines;
      report->nodes = r.report.nodes;
      report->triples = r.report.triples;
      report->relations = r.report.relations;
      report->skipped = r.report.skipped;
      report->filtered = r.report.filtered;
      report->duplicates = r.report.duplicates;
    }
    *out = new kgw_graph{std::move(r.graph)};
  });
}

KGW_API void kgw_graph_free(kgw_graph* g) { delete g; }

KGW_API uint64_t kgw_graph_node_count(const kgw_graph* g) {
  return g ? g->graph.node_count() : 0;
}

KGW_API uint64_t kgw_graph_triple_count(const kgw_graph* g) {
  return g ? g->graph.triple_count() : 0;
}

KGW_API kgw_status kgw_graph_find_node(const kgw_graph* g, const char* label,
                                       uint32_t* node) {
  return Guard([&] {
    Require(g && label && node, "argument");
    auto id = g->graph.node_by_label(kgwalk::NormalizeLabel(label));
    if (!id) {
      throw kgwalk::Error(kgwalk::ErrorKind::kNotFound,
                          std::string("no node labelled '") + label + "'");
    }
    *node = *id;
  });
}

KGW_API const char* kgw_graph_node_label(const kgw_graph* g, uint32_t node) {
  if (g == nullptr || node >= g->graph.node_count()) return nullptr;
  return g->graph.node(node).label.c_str();
}

KGW_API const char* kgw_graph_relation_name(const kgw_graph* g,
                                            uint16_t relation) {
  if (g == nullptr || relation >= g->graph.relation_count()) return nullptr;
  return g->graph.relation(relation).name.c_str();
}

KGW_API kgw_status kgw_graph_triple(const kgw_graph* g, uint64_t index,
                                    kgw_triple* out) {
  return Guard([&] {
    Require(g && out, "argument");
    const kgwalk::Triple& t = g->graph.triple(index);
    *out = kgw_triple{t.subject, t.relation, t.object, t.weight};
  });
}

KGW_API kgw_status kgw_graph_outbound(const kgw_graph* g, uint32_t node,
                                      const uint64_t** triples, size_t* count) {
  return Adjacent(g, node, true, triples, count);
}

KGW_API kgw_status kgw_graph_inbound(const kgw_graph* g, uint32_t node,
                                     const uint64_t** triples, size_t* count) {
  return Adjacent(g, node, false, triples, count);
}

KGW_API kgw_status kgw_graph_export_sentences(const kgw_graph* g,
                                              const char* templates_path,
                                              const char* out_path,
                                              uint64_t* written) {
  return Guard([&] {
    Require(g && out_path, "argument");
    kgwalk::Verbalizer v(g->graph, Templates(templates_path));
    uint64_t n = v.export_sentences(out_path);
    if (written) *written = n;
  });
}

KGW_API kgw_status kgw_graph_export_nodes(const kgw_graph* g,
                                          const char* out_path,
                                          uint64_t* written) {
  return Guard([&] {
    Require(g && out_path, "argument");
    uint64_t n = kgwalk::ExportNodeLabels(g->graph, out_path);
    if (written) *written = n;
  });
}

KGW_API kgw_status kgw_graph_verbalize(const kgw_graph* g,
                                       const char* templates_path,
                                       uint64_t index, char** sentence) {
  return Guard([&] {
    Require(g && sentence, "argument");
    kgwalk::Verbalizer v(g->graph, Templates(templates_path));
    *sentence = Dup(v.verbalize(index).text);
  });
}

KGW_API kgw_status kgw_index_load(const char* path, int mmap, kgw_index** out) {
  return Guard([&] {
    Require(path && out, "argument");
    *out = nullptr;
    auto h = std::make_unique<kgw_index>();
    h->index = kgwalk::EmbeddingIndex::Load(
        path, mmap ? kgwalk::IndexLoadMode::kMapped
                   : kgwalk::IndexLoadMode::kInMemory);
    h->ids.reserve(h->index.size());
    for (size_t i = 0; i < h->index.size(); ++i) {
      h->ids.emplace_back(h->index.id(i));
    }
    *out = h.release();
  });
}

KGW_API void kgw_index_free(kgw_index* index) { delete index; }

KGW_API uint64_t kgw_index_size(const kgw_index* index) {
  return index ? index->index.size() : 0;
}

KGW_API uint32_t kgw_index_dim(const kgw_index* index) {
  return index ? index->index.dim() : 0;
}

KGW_API const char* kgw_index_id(const kgw_index* index, uint64_t row) {
  if (index == nullptr || row >= index->ids.size()) return nullptr;
  return index->ids[row].c_str();
}

KGW_API kgw_status kgw_index_top_k(const kgw_index* index, const float* query,
                                   uint32_t dim, size_t k, kgw_hit* hits,
                                   size_t* count) {
  return Guard([&] {
    Require(index && query && hits && count, "argument");
    *count = 0;
    if (dim != index->index.dim()) {
      throw kgwalk::Error(kgwalk::ErrorKind::kInvalidArgument,
                          "query dimension " + std::to_string(dim) +
                              " != index dimension " +
                              std::to_string(index->index.dim()));
    }
    auto q = kgwalk::EmbeddingVector::Normalize({query, dim});
    auto result = index->index.top_k(q, k);
    for (size_t i = 0; i < result.size(); ++i) {
      hits[i] = kgw_hit{result[i].row, result[i].score};
    }
    *count = result.size();
  });
}

KGW_API kgw_status kgw_cosine(const float* a, const float* b, uint32_t dim,
                              double* out) {
  return Guard([&] {
    Require(a && b && out, "argument");
    *out = kgwalk::Cosine(kgwalk::EmbeddingVector::Normalize({a, dim}),
                          kgwalk::EmbeddingVector::Normalize({b, dim}));
  });
}

KGW_API kgw_status kgw_score_response(const char* item_json,
                                      const char* response, int* correct,
                                      const char** reason) {
  return Guard([&] {
    Require(item_json && response && correct && reason, "argument");
    auto items = kgwalk::ParseDataset(item_json);
    if (items.size() != 1) {
      throw kgwalk::Error(kgwalk::ErrorKind::kInvalidArgument,
                          "expected exactly one item");
    }
    kgwalk::Verdict v = kgwalk::ScoreResponse(response, items[0]);
    *correct = v.correct ? 1 : 0;
    *reason = kgwalk::ReasonName(v.reason);
  });
}

KGW_API kgw_status kgw_run_experiment(const char* config_path,
                                      const char* out_dir, kgw_log_fn log,
                                      void* user, kgw_run_summary* summary) {
  return Guard([&] {
    Require(config_path != nullptr, "config path");
    kgwalk::ExperimentConfig config = kgwalk::LoadConfig(config_path);
    kgwalk::LogFn sink;
    if (log != nullptr) {
      sink = [log, user](const std::string& m) { log(m.c_str(), user); };
    }
    kgwalk::RunOutcome r =
        kgwalk::RunExperiment(config, out_dir ? out_dir : "", sink);
    if (summary != nullptr) {
      summary->n = r.summary.n;
      summary->correct = r.summary.correct;
      summary->errors = r.summary.errors;
      summary->accuracy = r.summary.accuracy;
      summary->generated = r.generated;
      summary->resumed = r.resumed;
      summary->short_contexts = r.short_contexts;
    }
  });
}

KGW_API kgw_status kgw_score_journal(const char* journal_path,
                                     const char* dataset_path,
                                     const char* out_dir,
                                     char** summary_json) {
  return Guard([&] {
    Require(journal_path && dataset_path, "argument");
    kgwalk::ScoreOutcome r = kgwalk::ScoreJournal(journal_path, dataset_path);
    if (out_dir != nullptr) {
      namespace fs = std::filesystem;
      fs::create_directories(out_dir);
      std::string results;
      for (const kgwalk::Verdict& v : r.verdicts) {
        results += kgwalk::ResultLine(v);
      }
      kgwalk::WriteFileAtomic((fs::path(out_dir) / kgwalk::kResultsFile).string(),
                              results);
      kgwalk::WriteFileAtomic((fs::path(out_dir) / kgwalk::kSummaryFile).string(),
                              r.summary_json);
    }
    if (summary_json != nullptr) *summary_json = Dup(r.summary_json);
  });
}

KGW_API kgw_status kgw_report_table(const char* const* run_dirs, size_t count,
                                    char** table) {
  return Guard([&] {
    Require(table != nullptr, "table");
    Require(run_dirs != nullptr || count == 0, "run_dirs");
    std::vector<std::string> dirs(run_dirs, run_dirs + count);
    *table = Dup(kgwalk::ReportRuns(dirs));
  });
}

}  // extern "C"
