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

#include "kg/conceptnet.h"

#include <zlib.h>

#include <fstream>
#include <memory>
#include "json.hpp"

#include "common/error.h"
#include "common/text.h"

namespace kgwalk {
namespace {

// Line source over either a plain file or a gzip stream.
class LineReader {
 public:
  explicit LineReader(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) throw Error(ErrorKind::kIo, "cannot open " + path);
      gzbuffer(gz_, 1 << 20);
    } else {
      plain_.open(path, std::ios::binary);
      if (!plain_) throw Error(ErrorKind::kIo, "cannot open " + path);
    }
    path_ = path;
  }
  ~LineReader() {
    if (gz_ != nullptr) gzclose(gz_);
  }
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool Next(std::string* line) {
    if (gz_ == nullptr) {
      if (!std::getline(plain_, *line)) {
        if (plain_.bad()) throw Error(ErrorKind::kIo, "read failed: " + path_);
        return false;
      }
    } else {
      line->clear();
      char buf[4096];
      bool any = false;
      while (gzgets(gz_, buf, sizeof(buf)) != nullptr) {
        any = true;
        line->append(buf);
        if (!line->empty() && line->back() == '\n') break;
      }
      if (!any) {
        int err = 0;
        const char* msg = gzerror(gz_, &err);
        if (err != Z_OK && err != Z_STREAM_END) {
          throw Error(ErrorKind::kIo, path_ + ": " + msg);
        }
        return false;
      }
      if (!line->empty() && line->back() == '\n') line->pop_back();
    }
    if (!line->empty() && line->back() == '\r') line->pop_back();
    return true;
  }

 private:
  std::ifstream plain_;
  gzFile gz_ = nullptr;
  std::string path_;
};

// Splits "/c/en/alcohol/n/..." into language and term. Returns false when
// the URI is not a concept URI.
bool SplitConceptUri(std::string_view uri, std::string_view* language,
                     std::string_view* term) {
  if (uri.substr(0, 3) != "/c/") return false;
  auto parts = Split(uri.substr(3), '/');
  if (parts.size() < 2 || parts[0].empty() || parts[1].empty()) return false;
  *language = parts[0];
  *term = parts[1];
  return true;
}

}  // namespace

LineStatus ParseAssertionLine(std::string_view line, std::string_view language,
                              ParsedAssertion* out) {
  auto fields = Split(line, '\t');
  if (fields.size() != 5) return LineStatus::kMalformed;
  std::string_view relation = fields[1];
  if (relation.substr(0, 3) != "/r/" || relation.size() == 3) {
    return LineStatus::kMalformed;
  }
  const std::string_view start = fields[2];
  const std::string_view end = fields[3];
  std::string_view start_lang, start_term, end_lang, end_term;
  const bool start_ok = SplitConceptUri(start, &start_lang, &start_term);
  const bool end_ok = SplitConceptUri(end, &end_lang, &end_term);
  if (!start_ok) {
    return start.substr(0, 1) == "/" ? LineStatus::kFiltered
                                     : LineStatus::kMalformed;
  }
  // ExternalURL and friends point outside the concept space.
  if (!end_ok) {
    return end.substr(0, 1) == "/" || end.substr(0, 4) == "http"
               ? LineStatus::kFiltered
               : LineStatus::kMalformed;
  }
  if (start_lang != language || end_lang != language) {
    return LineStatus::kFiltered;
  }

  nlohmann::json meta = nlohmann::json::parse(fields[4], nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) return LineStatus::kMalformed;
  auto weight = meta.find("weight");
  if (weight == meta.end() || !weight->is_number()) {
    return LineStatus::kMalformed;
  }
  const double w = weight->get<double>();
  if (!(w >= 0.0)) return LineStatus::kMalformed;

  out->relation = std::string(relation.substr(3));
  while (!out->relation.empty() && out->relation.back() == '/') {
    out->relation.pop_back();
  }
  out->start_term = std::string(start_term);
  out->end_term = std::string(end_term);
  out->start_uri = "/c/" + std::string(start_lang) + "/" + out->start_term;
  out->end_uri = "/c/" + std::string(end_lang) + "/" + out->end_term;
  out->weight = w;
  return LineStatus::kOk;
}

IngestResult IngestConceptNet(const std::string& path,
                              const IngestOptions& options) {
  if (options.language.size() != 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "language must be a 2-letter code, got '" + options.language +
                    "'");
  }
  LineReader reader(path);
  GraphBuilder builder;
  builder.set_dedupe(options.dedupe);
  IngestReport report;
  std::string line;
  ParsedAssertion parsed;
  while (reader.Next(&line)) {
    ++report.lines;
    if (Trim(line).empty()) {
      ++report.skipped;
      continue;
    }
    switch (ParseAssertionLine(line, options.language, &parsed)) {
      case LineStatus::kMalformed:
        ++report.skipped;
        continue;
      case LineStatus::kFiltered:
        ++report.filtered;
        continue;
      case LineStatus::kOk:
        break;
    }
    const NodeId s = builder.intern_node(parsed.start_term, parsed.start_uri);
    const RelationId r = builder.intern_relation(parsed.relation);
    const NodeId o = builder.intern_node(parsed.end_term, parsed.end_uri);
    if (!builder.add_triple(s, r, o, parsed.weight)) ++report.duplicates;
  }
  if (builder.triple_count() == 0) {
    throw Error(ErrorKind::kData, "zero triples ingested from " + path +
                                      " (language '" + options.language +
                                      "')");
  }
  IngestResult result{std::move(builder).Build(), report};
  result.report.nodes = result.graph.node_count();
  result.report.triples = result.graph.triple_count();
  result.report.relations = result.graph.relation_count();
  return result;
}

}  // namespace kgwalk
