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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion; exit status is
// nonzero if anything failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common/error.h"
#include "common/text.h"
#include "embed/index.h"
#include "embed/vector_file.h"
#include "eval/qa_item.h"
#include "eval/scorer.h"
#include "json.hpp"
#include "kg/conceptnet.h"
#include "run/config.h"
#include "run/journal.h"
#include "run/runner.h"
#include "support/test_support.h"
#include "verbalize/verbalizer.h"
#include "walk/rng.h"
#include "walk/shape.h"
#include "walk/walker.h"

namespace kgwalk {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

enum class Outcome { kPass, kFail, kSkip };

struct Result {
  Outcome outcome = Outcome::kFail;
  std::string detail;
};

Result Pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Result Fail(std::string d) { return {Outcome::kFail, std::move(d)}; }

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Result RetrievalOracle() {
  const auto start = Clock::now();
  testing::TempDir dir;
  size_t instances = 0, queries = 0;
  for (uint32_t dim : {8u, 64u, 768u}) {
    for (uint64_t rep = 0; rep < 3; ++rep) {
      const uint64_t seed = 1000 * dim + rep;
      auto vs = testing::RandomUnitVectors(10000, dim, seed);
      std::vector<VectorRecord> recs;
      for (size_t i = 0; i < vs.size(); ++i) recs.push_back({std::to_string(i), vs[i]});
      const std::string path = dir.file("o.kgwv");
      WriteVectorFile(path, dim, recs);
      EmbeddingIndex mem = EmbeddingIndex::Load(path, IndexLoadMode::kInMemory);
      EmbeddingIndex map = EmbeddingIndex::Load(path, IndexLoadMode::kMapped);
      ++instances;
      // Queries: fresh random directions plus a few stored vectors.
      auto qs = testing::RandomUnitVectors(8, dim, seed + 77);
      qs.push_back(vs[17]);
      qs.push_back(vs[9999]);
      for (const auto& q : qs) {
        ++queries;
        // Oracle: every score in double from the raw floats, full sort.
        std::vector<std::pair<double, size_t>> all(vs.size());
        double nq = 0;
        for (float x : q) nq += double(x) * x;
        for (size_t i = 0; i < vs.size(); ++i) {
          double dot = 0, nv = 0;
          for (uint32_t d = 0; d < dim; ++d) {
            dot += double(vs[i][d]) * q[d];
            nv += double(vs[i][d]) * vs[i][d];
          }
          all[i] = {dot / std::sqrt(nq * nv), i};
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
          return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        const auto qv = EmbeddingVector::Normalize(q);
        for (size_t k : {1u, 2u, 3u, 10u}) {
          for (const EmbeddingIndex* idx : {&mem, &map}) {
            for (unsigned threads : {1u, 4u}) {
              auto hits = idx->top_k(qv, k, threads);
              if (hits.size() != k) return Fail("wrong result length");
              for (size_t i = 0; i < k; ++i) {
                if (hits[i].id != std::to_string(all[i].second)) {
                  return Fail("D=" + std::to_string(dim) + " k=" + std::to_string(k) +
                              " rank " + std::to_string(i) + ": got " +
                              std::string(hits[i].id) + ", oracle " +
                              std::to_string(all[i].second));
                }
              }
            }
          }
        }
      }
    }
  }
  const double secs = Seconds(start);
  if (secs >= 60) return Fail("took " + Fmt("%.1f", secs) + " s");
  return Pass(std::to_string(instances) + " instances x 10000 vectors, D in {8,64,768}, " +
              std::to_string(queries) + " queries, k in {1,2,3,10}, in-memory and mapped, " +
              "1 and 4 scan threads; " + Fmt("%.1f", secs) + " s");
}

Result CosineIdentities() {
  auto vs = testing::RandomUnitVectors(1000, 32, 5);
  std::mt19937_64 rng(6);
  double worst_self = 0, worst_orth = 0, worst_anti = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    // Scale to make normalization do work.
    std::vector<float> v = vs[i];
    const float scale = 0.01f + static_cast<float>(rng() % 1000);
    for (float& x : v) x *= scale;
    const auto a = EmbeddingVector::Normalize(v);
    // Orthogonal partner: Gram-Schmidt against another random vector.
    const auto& w = vs[(i + 1) % vs.size()];
    double dot = 0;
    for (size_t d = 0; d < v.size(); ++d) dot += double(w[d]) * vs[i][d];
    std::vector<double> ud(v.size());
    for (size_t d = 0; d < v.size(); ++d) ud[d] = w[d] - dot * vs[i][d];
    double nu = 0;
    for (double x : ud) nu += x * x;
    std::vector<float> u(v.size()), neg(v.size());
    for (size_t d = 0; d < v.size(); ++d) {
      u[d] = static_cast<float>(ud[d] / std::sqrt(nu));
      neg[d] = -v[d];
    }
    worst_self = std::max(worst_self, std::abs(Cosine(a, a) - 1.0));
    worst_orth = std::max(worst_orth, std::abs(Cosine(a, EmbeddingVector::Normalize(u))));
    worst_anti = std::max(worst_anti, std::abs(Cosine(a, EmbeddingVector::Normalize(neg)) + 1.0));
  }
  const std::string detail = "1000 vectors; max |cos(v,v)-1| = " + Fmt("%.2e", worst_self) +
                             ", max |cos(v,u_perp)| = " + Fmt("%.2e", worst_orth) +
                             ", max |cos(v,-v)+1| = " + Fmt("%.2e", worst_anti);
  if (worst_self > 1e-5 || worst_orth > 1e-6 || worst_anti > 1e-5) return Fail(detail);
  return Pass(detail);
}

Result WalkInvariants() {
  const auto start = Clock::now();
  KnowledgeGraph g = testing::RandomGraph(500, 3000, 2024);
  const std::vector<ChainShape> shapes = {
      ChainShape::Parse("4->1"),           ChainShape::Parse("1->2"),
      ChainShape::Parse("5->4,4->1"),      ChainShape::Parse("4->1,1->2"),
      ChainShape::Parse("1->2,2->3"),      ChainShape::Parse("5->4,4->1,1->2"),
      ChainShape::Parse("4->1,1->2,2->3"), ChainShape::Parse("5->4,4->1,1->2,2->3")};
  const RelevanceMode modes[] = {RelevanceMode::kRelevant, RelevanceMode::kIrrelevantAnchor,
                                 RelevanceMode::kRandomTriplesFromAnchor};
  size_t full = 0, truncated = 0;
  for (uint64_t w = 0; w < 10000; ++w) {
    const ChainShape& shape = shapes[w % shapes.size()];
    const RelevanceMode mode = modes[(w / shapes.size()) % 3];
    const uint64_t seed = SplitMix64(w);
    Rng rng(seed);
    const NodeId anchor = g.random_node(rng);
    std::optional<TripleIndex> first;
    if (mode == RelevanceMode::kRelevant) {
      auto pool = OneHopTriples(g, anchor, Directions::ForShape(shape));
      if (pool.empty()) {
        ++truncated;
        continue;
      }
      first = pool[rng.Uniform(pool.size())];
    }
    WalkChain c = ExtendChain(g, anchor, shape, rng, mode, first);
    auto where = [&](const std::string& what) {
      return Fail("walk " + std::to_string(w) + " (" + shape.ToString() + "): " + what);
    };
    // Path property holds for every chain, truncated or not.
    for (size_t i = 0; i + 1 < c.steps.size(); ++i) {
      const Triple& a = g.triple(c.steps[i].triple);
      const Triple& b = g.triple(c.steps[i + 1].triple);
      if (a.object != b.subject) return where("not a directed path");
      if (a.subject == b.object) return where("immediate backtracking");
    }
    for (const ChainStep& s : c.steps) {
      if (s.triple >= g.triple_count()) return where("step is not a graph edge");
      const Triple& t = g.triple(s.triple);
      auto out = g.outbound(t.subject);
      if (std::find(out.begin(), out.end(), s.triple) == out.end()) {
        return where("step missing from adjacency");
      }
      if (t.is_self_loop()) return where("self-loop");
      if (!shape.contains(s.edge)) return where("step outside the shape");
      if (s.edge == ChainEdge::k4to1 && t.object != c.anchor) return where("4->1 misses anchor");
      if (s.edge == ChainEdge::k1to2 && t.subject != c.anchor) return where("1->2 misses anchor");
    }
    if (c.truncated) {
      ++truncated;
      if (c.steps.size() >= shape.edge_count()) return where("flagged truncated but complete");
      continue;
    }
    ++full;
    if (c.steps.size() != shape.edge_count()) return where("edge count");
    std::set<NodeId> nodes;
    for (const ChainStep& s : c.steps) {
      nodes.insert(g.triple(s.triple).subject);
      nodes.insert(g.triple(s.triple).object);
    }
    if (nodes.size() > shape.node_count()) return where("node count");
    if (!nodes.contains(c.anchor)) return where("anchor not on chain");
    for (size_t i = 0; i < c.steps.size(); ++i) {
      if (c.steps[i].edge != shape.edges()[i]) return where("positions out of order");
    }
    // Determinism: replay the same seed.
    if (w % 97 == 0) {
      Rng again(seed);
      const NodeId a2 = g.random_node(again);
      std::optional<TripleIndex> f2;
      if (mode == RelevanceMode::kRelevant) {
        auto pool = OneHopTriples(g, a2, Directions::ForShape(shape));
        f2 = pool[again.Uniform(pool.size())];
      }
      WalkChain c2 = ExtendChain(g, a2, shape, again, mode, f2);
      for (size_t i = 0; i < c.steps.size(); ++i) {
        if (c2.steps.size() != c.steps.size() || c2.steps[i].triple != c.steps[i].triple) {
          return where("not reproducible from its seed");
        }
      }
    }
  }
  const double secs = Seconds(start);
  if (secs >= 60) return Fail("took " + Fmt("%.1f", secs) + " s");
  if (full < 5000) return Fail("only " + std::to_string(full) + " untruncated chains");
  return Pass("10000 walks on a 500-node graph, 8 shapes x 3 modes: " + std::to_string(full) +
              " untruncated, " + std::to_string(truncated) + " truncated; " +
              Fmt("%.2f", secs) + " s");
}

std::string WriteRunConfig(const testing::RunFixture& f, const std::string& path) {
  nlohmann::json c = {
      {"name", "acceptance-qgi"},
      {"regime", "qgi"},
      {"shape", "4->1,1->2"},
      {"seed", 42},
      {"dataset", f.dataset},
      {"graph", {{"dump", f.dump}}},
      {"vectors",
       {{"nodes", f.nodes}, {"sentences", f.sentences}, {"question", f.question},
        {"concept", f.concepts}, {"question_concept", f.question_concept}}},
      {"backend", {{"kind", "replay"}, {"path", f.replay}}},
      {"parallelism", 4},
  };
  testing::WriteText(path, c.dump(2));
  return path;
}

Result Determinism() {
  testing::TempDir dir;
  auto f = testing::MakeRunFixture(dir.path().string());
  const std::string config = WriteRunConfig(f, dir.file("qgi.json"));
  for (const char* out : {"a", "b"}) {
    const std::string cmd = std::string("\"") + KGWALK_CLI + "\" run -q \"" + config +
                            "\" --out \"" + dir.file(out) + "\" > /dev/null";
    if (int rc = std::system(cmd.c_str()); rc != 0) {
      return Fail("kgwalk run exited with " + std::to_string(rc));
    }
  }
  std::vector<std::string> same;
  for (const char* file : {kJournalFile, kSummaryFile}) {
    const std::string a = ReadFile((fs::path(dir.file("a")) / file).string());
    const std::string b = ReadFile((fs::path(dir.file("b")) / file).string());
    if (a != b) return Fail(std::string(file) + " differs between runs");
    same.push_back(std::string(file) + " (" + std::to_string(a.size()) + " bytes)");
  }
  return Pass("two `kgwalk run` executions (qgi, replay backend): byte-identical " + same[0] +
              " and " + same[1]);
}

Result EvaluatorFidelity() {
  QAItem item;
  item.id = "exercise";
  item.stem = "What is good for your body?";
  item.choices = {{'A', "television"}, {'B', "exercise"}, {'C', "muscle"},
                  {'D', "candy"}, {'E', "stress"}};
  item.answer_key = 'B';
  ValidateItem(item);
  const std::vector<std::pair<std::string, bool>> cases = {
      {"B", true},           {"B.", true},           {"B,", true},
      {"exercise", true},    {"X. exercise", true},  {"A. exercise", false},
      {"B. exercise, C. muscle", false},             {"", false}};
  std::string detail;
  for (const auto& [response, expected] : cases) {
    const Verdict v = ScoreResponse(response, item);
    detail += "'" + response + "'=" + (v.correct ? "correct" : "incorrect") + " ";
    if (v.correct != expected) return Fail("'" + response + "' scored " + ReasonName(v.reason));
  }
  if (ScoreResponse("A. exercise", item).reason != VerdictReason::kWrongLetter ||
      ScoreResponse("B. exercise, C. muscle", item).reason != VerdictReason::kMultiSelect) {
    return Fail("incorrect cases carry the wrong reason");
  }
  detail.pop_back();
  return Pass("8/8: " + detail);
}

Result EndToEndReplay() {
  // Hand-computed fraction from the hand-labelled verdict file.
  size_t labelled = 0, hand_correct = 0;
  const std::string labels = ReadFile(testing::DataPath("csqa20_expected.tsv"));
  for (std::string_view line : Split(labels, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = Split(line, '\t');
    ++labelled;
    hand_correct += fields[1] == "1";
  }
  if (labelled != 20) return Fail("expected 20 hand labels, found " + std::to_string(labelled));

  testing::TempDir dir;
  nlohmann::json c = {{"name", "acceptance-baseline"},
                      {"dataset", testing::DataPath("csqa20.jsonl")},
                      {"backend", {{"kind", "replay"}, {"path", testing::DataPath("csqa20_replay.jsonl")}}}};
  RunOutcome run = RunExperiment(ParseConfig(c, ""), dir.file("run"));
  const double expected = static_cast<double>(hand_correct) / 20.0;
  if (run.summary.n != 20 || run.summary.correct != hand_correct ||
      run.summary.accuracy != expected) {
    return Fail("accuracy " + Fmt("%.4f", run.summary.accuracy) + " vs hand-computed " +
                std::to_string(hand_correct) + "/20");
  }

  // Flip one wrong answer (q19 answered "E", key "A") in the journal.
  const std::string journal = (fs::path(dir.file("run")) / kJournalFile).string();
  std::vector<JournalEntry> entries = ReadJournal(journal);
  std::string edited;
  for (JournalEntry& e : entries) {
    if (e.item_id == "q19") e.text = "A";
    edited += JournalLine(e);
  }
  testing::WriteText(journal, edited);
  ScoreOutcome flipped = ScoreJournal(journal, testing::DataPath("csqa20.jsonl"));
  if (flipped.summary.correct != hand_correct + 1 ||
      flipped.summary.accuracy != static_cast<double>(hand_correct + 1) / 20.0) {
    return Fail("flip gave " + std::to_string(flipped.summary.correct) + "/20");
  }
  return Pass("replay run accuracy " + std::to_string(hand_correct) + "/20 = " +
              Fmt("%.2f", expected) + " matches hand labels; flipping q19 gives " +
              std::to_string(hand_correct + 1) + "/20 (+1/20)");
}

Result CorpusScale() {
  const char* dump = std::getenv("KGW_CONCEPTNET_DUMP");
  if (dump == nullptr || *dump == '\0') {
    return {Outcome::kSkip,
            "set KGW_CONCEPTNET_DUMP to a ConceptNet 5 assertions dump "
            "(or run tools/corpus_scale_check.sh)"};
  }
  const auto start = Clock::now();
  IngestOptions options;  // language "en", no dedupe
  IngestResult r = IngestConceptNet(dump, options);
  Verbalizer v(r.graph, TemplateTable::Builtin());
  testing::TempDir dir;
  const uint64_t sentences = v.export_sentences(dir.file("sentences.tsv"));
  std::ostringstream d;
  d << "filter: start and end /c/en/, dedupe off; lines " << r.report.lines << ", skipped "
    << r.report.skipped << ", filtered " << r.report.filtered << "; sentences " << sentences
    << " (reference 3423004, " << std::showpos << static_cast<int64_t>(sentences) - 3423004
    << std::noshowpos << "); " << Fmt("%.0f", Seconds(start)) << " s";
  if (sentences != r.report.triples) return Fail(d.str());
  return Pass(d.str());
}

Result AnchorWorkedExample() {
  KnowledgeGraph g = IngestConceptNet(testing::DataPath("alcohol_graph.csv"), {}).graph;
  // Hand-authored label embeddings: one axis per label; "liquor" sits
  // closest to "alcohol", then beer and wine.
  const uint32_t dim = static_cast<uint32_t>(g.node_count()) + 1;
  std::vector<VectorRecord> nodes;
  for (const Node& n : g.nodes()) {
    std::vector<float> v(dim, 0.0f);
    v[n.id] = 1.0f;
    v[dim - 1] = 0.2f;
    nodes.push_back({std::to_string(n.id), v});
  }
  EmbeddingIndex index = EmbeddingIndex::FromRecords(dim, nodes);
  std::vector<float> liquor(dim, 0.0f);
  liquor[*g.node_by_label("alcohol")] = 0.8f;
  liquor[*g.node_by_label("beer")] = 0.5f;
  liquor[*g.node_by_label("wine")] = 0.3f;
  liquor[dim - 1] = 0.1f;
  Rng rng(1);
  const NodeId anchor = SelectAnchor(EmbeddingVector::Normalize(liquor), index, g,
                                     RelevanceMode::kRelevant, rng);
  if (g.node(anchor).label != "alcohol") return Fail("anchor is " + g.node(anchor).label);
  const auto pool = OneHopTriples(g, anchor, {});
  const size_t out = g.outbound(anchor).size(), in = g.inbound(anchor).size();
  if (pool.size() != 8 || out != 6 || in != 2) {
    return Fail("pool " + std::to_string(pool.size()) + " (" + std::to_string(out) + " out, " +
                std::to_string(in) + " in)");
  }
  return Pass("\"liquor\" -> \"alcohol\"; one-hop pool 8 triples (6 outbound, 2 inbound)");
}

struct Criterion {
  const char* name;
  std::function<Result()> run;
};

}  // namespace
}  // namespace kgwalk

int main() {
  using namespace kgwalk;
  const std::vector<Criterion> criteria = {
      {"retrieval-oracle-equivalence", RetrievalOracle},
      {"cosine-identities", CosineIdentities},
      {"walk-invariants", WalkInvariants},
      {"determinism", Determinism},
      {"evaluator-fidelity", EvaluatorFidelity},
      {"end-to-end-replay", EndToEndReplay},
      {"corpus-scale-check", CorpusScale},
      {"anchor-worked-example", AnchorWorkedExample},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = Fail(std::string("exception: ") + e.what());
    }
    const char* tag = r.outcome == Outcome::kPass   ? "PASS"
                      : r.outcome == Outcome::kSkip ? "SKIP"
                                                    : "FAIL";
    if (r.outcome == Outcome::kFail) ++failed;
    std::printf("%s %s: %s\n", tag, c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
