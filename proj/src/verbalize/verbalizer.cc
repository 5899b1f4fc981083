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

#include "verbalize/verbalizer.h"

#include <fstream>

#include "common/error.h"
#include "common/text.h"

namespace kgwalk {

extern const char kBuiltinRelationTemplates[];

namespace {

std::string OneLine(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

TemplateTable TemplateTable::Builtin() {
  return Parse(kBuiltinRelationTemplates);
}

TemplateTable TemplateTable::FromFile(const std::string& path) {
  return Parse(ReadFile(path));
}

TemplateTable TemplateTable::Parse(std::string_view tsv) {
  TemplateTable table;
  int line_no = 0;
  for (std::string_view raw : Split(tsv, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    auto fields = Split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorKind::kConfig,
                  "template line " + std::to_string(line_no) +
                      ": expected 'relation<TAB>template[<TAB>symmetric]'");
    }
    RelationTemplate t;
    t.name = std::string(Trim(fields[0]));
    t.text = std::string(Trim(fields[1]));
    t.symmetric = fields.size() == 3 && Trim(fields[2]) == "1";
    const auto subj = t.text.find("SUBJ");
    const auto obj = t.text.find("OBJ");
    if (subj == std::string::npos || obj == std::string::npos ||
        t.text.find("SUBJ", subj + 4) != std::string::npos ||
        t.text.find("OBJ", obj + 3) != std::string::npos) {
      throw Error(ErrorKind::kConfig,
                  "template for " + t.name +
                      " must contain SUBJ and OBJ exactly once each");
    }
    if (!table.by_name_.emplace(t.name, table.templates_.size()).second) {
      throw Error(ErrorKind::kConfig, "duplicate template for " + t.name);
    }
    table.templates_.push_back(std::move(t));
  }
  return table;
}

const RelationTemplate* TemplateTable::find(std::string_view relation) const {
  auto it = by_name_.find(std::string(relation));
  return it == by_name_.end() ? nullptr : &templates_[it->second];
}

Verbalizer::Verbalizer(const KnowledgeGraph& graph, TemplateTable templates)
    : graph_(&graph), templates_(std::move(templates)) {
  compiled_.resize(graph.relation_count());
  for (const Relation& rel : graph.relations()) {
    const RelationTemplate* t = templates_.find(rel.name);
    if (t == nullptr) continue;
    Compiled& c = compiled_[rel.id];
    c.present = true;
    const std::string text = AsciiLower(t->text);
    // Slots are located in the original text; lowercasing keeps offsets.
    const size_t subj = t->text.find("SUBJ");
    const size_t obj = t->text.find("OBJ");
    const bool subject_first = subj < obj;
    const size_t first = subject_first ? subj : obj;
    const size_t first_len = subject_first ? 4 : 3;
    const size_t second = subject_first ? obj : subj;
    const size_t second_len = subject_first ? 3 : 4;
    c.pieces.push_back(text.substr(0, first));
    c.pieces.push_back(
        text.substr(first + first_len, second - first - first_len));
    c.pieces.push_back(text.substr(second + second_len));
    c.slot_is_subject = {subject_first, !subject_first};
  }
}

std::string Verbalizer::render(const Triple& triple) const {
  if (triple.relation >= compiled_.size() || !compiled_[triple.relation].present) {
    throw Error(ErrorKind::kData,
                "no template for relation '" +
                    graph_->relation(triple.relation).name + "'");
  }
  const Compiled& c = compiled_[triple.relation];
  const std::string& subject = graph_->node(triple.subject).label;
  const std::string& object = graph_->node(triple.object).label;
  std::string out = c.pieces[0];
  out += c.slot_is_subject[0] ? subject : object;
  out += c.pieces[1];
  out += c.slot_is_subject[1] ? subject : object;
  out += c.pieces[2];
  return AsciiLower(OneLine(out));
}

Sentence Verbalizer::verbalize(TripleIndex index) const {
  return Sentence{render(graph_->triple(index)), index};
}

void Verbalizer::verbalize_corpus(
    const std::function<void(const Sentence&)>& sink) const {
  const auto triples = graph_->triples();
  for (TripleIndex i = 0; i < triples.size(); ++i) {
    Sentence s;
    try {
      s = Sentence{render(triples[i]), i};
    } catch (const Error& e) {
      throw Error(e.kind(),
                  "triple " + std::to_string(i) + ": " + e.what());
    }
    sink(s);
  }
}

uint64_t Verbalizer::export_sentences(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  uint64_t count = 0;
  verbalize_corpus([&](const Sentence& s) {
    out << s.source_triple << '\t' << s.text << '\n';
    ++count;
  });
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
  return count;
}

uint64_t ExportNodeLabels(const KnowledgeGraph& graph,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  for (const Node& n : graph.nodes()) {
    out << n.id << '\t' << OneLine(n.label) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
  return graph.node_count();
}

}  // namespace kgwalk
