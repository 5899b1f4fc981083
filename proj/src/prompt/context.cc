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

#include "prompt/context.h"

#include <charconv>

#include "common/error.h"
#include "common/text.h"

namespace kgwalk {
namespace {

bool UsesChain(Regime r) {
  return r == Regime::kGraphInferenceOnly || r == Regime::kKgi ||
         r == Regime::kQgi;
}

std::optional<TripleIndex> ParseTripleIndex(std::string_view id) {
  TripleIndex v = 0;
  auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
  if (ec != std::errc() || ptr != id.data() + id.size()) return std::nullopt;
  return v;
}

EmbeddingVector QueryVector(const EmbeddingIndex* index, const QAItem& item,
                            const char* what) {
  const auto row = index->find(item.id);
  if (!row) {
    throw Error(ErrorKind::kData, std::string("no ") + what +
                                      " vector for item " + item.id);
  }
  return index->vector(*row);
}

void AppendTriple(ContextResult& out, const Verbalizer& v, TripleIndex t) {
  out.sentences.push_back(v.verbalize(t).text);
  out.sources.push_back("triple:" + std::to_string(t));
}

void AppendRetrieved(ContextResult& out, size_t k, const QAItem& item,
                     const ContextResources& res) {
  const EmbeddingVector query =
      QueryVector(res.question_concept_vectors, item, "question+concept");
  for (const Hit& hit : res.sentence_vectors->top_k(query, k, res.scan_threads)) {
    if (res.documents != nullptr) {
      const std::string* text = res.documents->find(hit.id);
      if (text == nullptr) {
        throw Error(ErrorKind::kData,
                    "document store has no text for id " + std::string(hit.id));
      }
      out.sentences.push_back(*text);
      out.sources.push_back("doc:" + std::string(hit.id));
      continue;
    }
    const auto t = ParseTripleIndex(hit.id);
    if (!t || *t >= res.graph->triple_count()) {
      throw Error(ErrorKind::kData, "sentence index id " + std::string(hit.id) +
                                        " is not a triple index of the graph");
    }
    AppendTriple(out, *res.verbalizer, *t);
  }
}

// One walk attempt; returns the chain (possibly truncated).
WalkChain WalkOnce(const ExperimentSetting& setting, const QAItem& item,
                   const ContextResources& res, Rng& rng, std::string* note) {
  const ChainShape& shape = *setting.shape;
  const KnowledgeGraph& g = *res.graph;
  RelevanceMode mode = RelevanceMode::kRelevant;
  if (setting.regime == Regime::kGraphInferenceOnly) {
    mode = setting.relevant ? RelevanceMode::kRandomTriplesFromAnchor
                            : RelevanceMode::kIrrelevantAnchor;
  }
  NodeId anchor = 0;
  if (mode == RelevanceMode::kIrrelevantAnchor) {
    anchor = g.random_node(rng);
  } else {
    const EmbeddingIndex* qindex =
        setting.anchor_query == AnchorQuery::kConcept
            ? res.concept_vectors
            : res.question_concept_vectors;
    const EmbeddingVector q = QueryVector(qindex, item, "anchor query");
    anchor = SelectAnchor(q, *res.node_vectors, g, mode, rng);
  }
  std::optional<TripleIndex> first;
  if (mode == RelevanceMode::kRelevant) {
    const EmbeddingVector question =
        QueryVector(res.question_vectors, item, "question");
    try {
      first = SelectFirstTriple(anchor, question, g, *res.sentence_vectors,
                                Directions::ForShape(shape));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kData ||
          std::string_view(e.what()).find("stranded anchor") ==
              std::string_view::npos) {
        throw;
      }
      *note = e.what();
      WalkChain empty;
      empty.anchor = anchor;
      empty.seed = rng.seed();
      empty.truncated = true;
      return empty;
    }
  }
  return ExtendChain(g, anchor, shape, rng, mode, first);
}

}  // namespace

const char* RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kBaseline: return "baseline";
    case Regime::kRelevantInfoOnly: return "relevant-info-only";
    case Regime::kIrrelevantInfoOnly: return "irrelevant-info-only";
    case Regime::kGraphInferenceOnly: return "graph-inference-only";
    case Regime::kKgi: return "kgi";
    case Regime::kQgi: return "qgi";
  }
  return "baseline";
}

Regime ParseRegime(std::string_view name) {
  for (Regime r : {Regime::kBaseline, Regime::kRelevantInfoOnly,
                   Regime::kIrrelevantInfoOnly, Regime::kGraphInferenceOnly,
                   Regime::kKgi, Regime::kQgi}) {
    if (name == RegimeName(r)) return r;
  }
  throw Error(ErrorKind::kConfig, "unknown regime '" + std::string(name) + "'");
}

const char* AnchorQueryName(AnchorQuery q) {
  return q == AnchorQuery::kConcept ? "concept" : "concept+question";
}

AnchorQuery ParseAnchorQuery(std::string_view name) {
  if (name == "concept") return AnchorQuery::kConcept;
  if (name == "concept+question") return AnchorQuery::kConceptAndQuestion;
  throw Error(ErrorKind::kConfig,
              "unknown anchor query '" + std::string(name) + "'");
}

void ExperimentSetting::Validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::kConfig, m); };
  switch (regime) {
    case Regime::kBaseline:
      if (k != 0) fail("baseline requires k = 0");
      break;
    case Regime::kRelevantInfoOnly:
    case Regime::kIrrelevantInfoOnly:
      if (k == 0) fail(std::string(RegimeName(regime)) + " requires k >= 1");
      break;
    case Regime::kGraphInferenceOnly:
    case Regime::kKgi:
      if (!shape) fail(std::string(RegimeName(regime)) + " requires a shape");
      if (k != shape->edge_count()) {
        fail("k = " + std::to_string(k) + " does not match shape " +
             shape->ToString() + " with " +
             std::to_string(shape->edge_count()) + " edges");
      }
      break;
    case Regime::kQgi:
      if (!shape) fail("qgi requires a shape");
      if (retrieved_k == 0) fail("qgi requires retrieved_k >= 1");
      if (k != retrieved_k + shape->edge_count()) {
        fail("qgi k = " + std::to_string(k) + " must equal retrieved_k (" +
             std::to_string(retrieved_k) + ") + shape edges (" +
             std::to_string(shape->edge_count()) + ")");
      }
      break;
  }
  if (!UsesChain(regime) && shape) {
    fail(std::string(RegimeName(regime)) + " does not take a shape");
  }
  if (!irregular_order.empty()) {
    if (!shape) fail("irregular_order without a shape");
    std::vector<size_t> sorted = irregular_order;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i || sorted.size() != shape->edge_count()) {
        fail("irregular_order must permute 0.." +
             std::to_string(shape->edge_count() - 1));
      }
    }
  }
}

DirectionMode ExperimentSetting::EffectiveDirection() const {
  if (direction == DirectionMode::kIrregular) return direction;
  if (shape && !shape->listed_in_path_order()) return DirectionMode::kIrregular;
  return DirectionMode::kRegular;
}

std::vector<size_t> ExperimentSetting::ChainPermutation() const {
  if (!irregular_order.empty()) return irregular_order;
  if (shape && !shape->listed_in_path_order()) {
    return shape->listed_permutation();
  }
  return {};
}

DocumentStore DocumentStore::Load(const std::string& path) {
  DocumentStore store;
  const std::string contents = ReadFile(path);
  int line_no = 0;
  for (std::string_view line : Split(contents, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorKind::kData, path + ":" + std::to_string(line_no) +
                                        ": expected '<id>\\t<text>'");
    }
    if (!store.docs_
             .emplace(std::string(line.substr(0, tab)),
                      std::string(line.substr(tab + 1)))
             .second) {
      throw Error(ErrorKind::kData, path + ": duplicate id " +
                                        std::string(line.substr(0, tab)));
    }
  }
  return store;
}

const std::string* DocumentStore::find(std::string_view id) const {
  auto it = docs_.find(std::string(id));
  return it == docs_.end() ? nullptr : &it->second;
}

void CheckResources(const ExperimentSetting& s, const ContextResources& r) {
  auto need = [&](bool ok, const char* what) {
    if (!ok) {
      throw Error(ErrorKind::kConfig, std::string(RegimeName(s.regime)) +
                                          " needs " + what);
    }
  };
  const bool retrieves =
      s.regime == Regime::kRelevantInfoOnly || s.regime == Regime::kQgi;
  if (retrieves) {
    need(r.sentence_vectors != nullptr, "sentence vectors");
    need(r.question_concept_vectors != nullptr, "question+concept vectors");
    need(r.documents != nullptr ||
             (r.graph != nullptr && r.verbalizer != nullptr),
         "a graph or a document store for retrieved texts");
  }
  if (s.regime == Regime::kIrrelevantInfoOnly || UsesChain(s.regime)) {
    need(r.graph != nullptr && r.verbalizer != nullptr, "a graph");
  }
  const bool relevant_anchor =
      s.regime == Regime::kKgi || s.regime == Regime::kQgi ||
      (s.regime == Regime::kGraphInferenceOnly && s.relevant);
  if (relevant_anchor) {
    need(r.node_vectors != nullptr, "node vectors");
    if (s.anchor_query == AnchorQuery::kConcept) {
      need(r.concept_vectors != nullptr, "concept vectors");
    } else {
      need(r.question_concept_vectors != nullptr, "question+concept vectors");
    }
  }
  if (s.regime == Regime::kKgi || s.regime == Regime::kQgi) {
    need(r.sentence_vectors != nullptr, "sentence vectors");
    need(r.question_vectors != nullptr, "question vectors");
  }
}

ContextResult BuildContext(const ExperimentSetting& setting, const QAItem& item,
                           const ContextResources& res, uint64_t item_seed) {
  ContextResult out;
  switch (setting.regime) {
    case Regime::kBaseline:
      return out;
    case Regime::kRelevantInfoOnly:
      AppendRetrieved(out, setting.k, item, res);
      out.truncated = out.sentences.size() < setting.k;
      if (out.truncated) out.note = "index holds fewer than k sentences";
      return out;
    case Regime::kIrrelevantInfoOnly: {
      Rng rng(item_seed);
      for (TripleIndex t : SampleIrrelevantTriples(*res.graph, setting.k, rng)) {
        AppendTriple(out, *res.verbalizer, t);
      }
      return out;
    }
    case Regime::kGraphInferenceOnly:
    case Regime::kKgi:
    case Regime::kQgi:
      break;
  }

  if (setting.regime == Regime::kQgi) {
    AppendRetrieved(out, setting.retrieved_k, item, res);
  }
  std::optional<WalkChain> best;
  std::string note;
  for (uint32_t attempt = 0; attempt <= setting.max_reseeds; ++attempt) {
    Rng rng(ReseedAttempt(item_seed, attempt));
    WalkChain chain = WalkOnce(setting, item, res, rng, &note);
    out.reseeds = attempt;
    if (!best || chain.steps.size() > best->steps.size()) best = chain;
    if (!chain.truncated) break;
    if (!note.empty()) break;  // stranded anchor: reseeding cannot help
  }
  for (const Sentence& s :
       ChainToSentences(*best, *setting.shape, *res.verbalizer,
                        setting.EffectiveDirection(),
                        setting.ChainPermutation())) {
    out.sentences.push_back(s.text);
    out.sources.push_back("triple:" + std::to_string(s.source_triple));
  }
  out.truncated = best->truncated || out.sentences.size() < setting.k;
  if (out.truncated) {
    out.note = note.empty()
                   ? "walk dead-ended after " + std::to_string(out.reseeds) +
                         " reseeds; emitting " +
                         std::to_string(best->steps.size()) + " of " +
                         std::to_string(setting.shape->edge_count()) +
                         " chain sentences"
                   : note;
  }
  out.chain = std::move(best);
  return out;
}

}  // namespace kgwalk
