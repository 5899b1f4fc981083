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

#ifndef KGWALK_KGWALK_H_
#define KGWALK_KGWALK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(KGWALK_BUILDING_LIBRARY)
#define KGW_API __attribute__((visibility("default")))
#else
#define KGW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kgw_status {
  KGW_OK = 0,
  KGW_ERR_CONFIG = 1,
  KGW_ERR_DATA = 2,
  KGW_ERR_BACKEND = 3,
  KGW_ERR_INVALID_ARGUMENT = 4,
  KGW_ERR_NOT_FOUND = 5,
  KGW_ERR_IO = 6,
  KGW_ERR_INTERNAL = 7,
} kgw_status;

// Message for the last failed call on this thread; "" if none.
KGW_API const char* kgw_last_error(void);
KGW_API const char* kgw_version(void);

// Strings returned through char** out-parameters are owned by the caller.
KGW_API void kgw_string_free(char* s);

// ---- graph ----------------------------------------------------------------

typedef struct kgw_graph kgw_graph;

typedef struct kgw_ingest_report {
  uint64_t lines;
  uint64_t nodes;
  uint64_t triples;
  uint64_t relations;
  uint64_t skipped;     // malformed lines
  uint64_t filtered;    // other languages, non-concept endpoints
  uint64_t duplicates;  // dropped by deduplication
} kgw_ingest_report;

typedef struct kgw_triple {
  uint32_t subject;
  uint16_t relation;
  uint32_t object;
  double weight;
} kgw_triple;

// Reads a ConceptNet assertions dump (plain or .gz). `report` may be NULL.
KGW_API kgw_status kgw_graph_ingest(const char* path, const char* language,
                                    int dedupe, kgw_graph** out,
                                    kgw_ingest_report* report);
KGW_API void kgw_graph_free(kgw_graph* g);

KGW_API uint64_t kgw_graph_node_count(const kgw_graph* g);
KGW_API uint64_t kgw_graph_triple_count(const kgw_graph* g);
KGW_API kgw_status kgw_graph_find_node(const kgw_graph* g, const char* label,
                                       uint32_t* node);
// Borrowed; valid while the graph lives.
KGW_API const char* kgw_graph_node_label(const kgw_graph* g, uint32_t node);
KGW_API const char* kgw_graph_relation_name(const kgw_graph* g,
                                            uint16_t relation);
KGW_API kgw_status kgw_graph_triple(const kgw_graph* g, uint64_t index,
                                    kgw_triple* out);

// Adjacency in ingestion order. Borrowed arrays; valid while the graph lives.
KGW_API kgw_status kgw_graph_outbound(const kgw_graph* g, uint32_t node,
                                      const uint64_t** triples, size_t* count);
KGW_API kgw_status kgw_graph_inbound(const kgw_graph* g, uint32_t node,
                                     const uint64_t** triples, size_t* count);

// Text exports for the embedder: "<triple index>\t<sentence>" per triple and
// "<node id>\t<label>" per node. `templates_path` NULL uses the builtin table.
KGW_API kgw_status kgw_graph_export_sentences(const kgw_graph* g,
                                              const char* templates_path,
                                              const char* out_path,
                                              uint64_t* written);
KGW_API kgw_status kgw_graph_export_nodes(const kgw_graph* g,
                                          const char* out_path,
                                          uint64_t* written);

// Verbalizes one triple. *sentence must be released with kgw_string_free.
KGW_API kgw_status kgw_graph_verbalize(const kgw_graph* g,
                                       const char* templates_path,
                                       uint64_t index, char** sentence);

// ---- vector index -----------------------------------------------------------

typedef struct kgw_index kgw_index;

typedef struct kgw_hit {
  uint64_t row;
  double score;
} kgw_hit;

KGW_API kgw_status kgw_index_load(const char* path, int mmap, kgw_index** out);
KGW_API void kgw_index_free(kgw_index* index);
KGW_API uint64_t kgw_index_size(const kgw_index* index);
KGW_API uint32_t kgw_index_dim(const kgw_index* index);
// Borrowed; valid while the index lives.
KGW_API const char* kgw_index_id(const kgw_index* index, uint64_t row);
// Writes min(k, size) hits, best first; *count receives the number written.
KGW_API kgw_status kgw_index_top_k(const kgw_index* index, const float* query,
                                   uint32_t dim, size_t k, kgw_hit* hits,
                                   size_t* count);
KGW_API kgw_status kgw_cosine(const float* a, const float* b, uint32_t dim,
                              double* out);

// ---- evaluation -------------------------------------------------------------

// Scores one response against a single dataset line (CommonsenseQA JSON).
// *reason is a static string such as "letter-match".
KGW_API kgw_status kgw_score_response(const char* item_json,
                                      const char* response, int* correct,
                                      const char** reason);

// ---- experiments ------------------------------------------------------------

typedef struct kgw_run_summary {
  uint64_t n;
  uint64_t correct;
  uint64_t errors;
  double accuracy;
  uint64_t generated;
  uint64_t resumed;
  uint64_t short_contexts;
} kgw_run_summary;

typedef void (*kgw_log_fn)(const char* message, void* user);

// Runs a config file end to end. `out_dir` NULL uses the config's output_dir.
KGW_API kgw_status kgw_run_experiment(const char* config_path,
                                      const char* out_dir, kgw_log_fn log,
                                      void* user, kgw_run_summary* summary);

// Re-scores a journal; *summary_json receives the summary document.
KGW_API kgw_status kgw_score_journal(const char* journal_path,
                                     const char* dataset_path,
                                     const char* out_dir,
                                     char** summary_json);

// Tab-separated comparison of finished run directories.
KGW_API kgw_status kgw_report_table(const char* const* run_dirs, size_t count,
                                    char** table);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // KGWALK_KGWALK_H_
