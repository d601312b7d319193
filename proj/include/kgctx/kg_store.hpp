// Copyright 2026 The kgctx Authors
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

// ConceptNet triple store: ingest an assertions dump, keep English edges over
// the relation whitelist, and index triples for subject/object/pair lookup.
// Build is single-writer; once built the graph is immutable and safe for any
// number of concurrent readers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kgctx/concept.hpp"
#include "kgctx/errors.hpp"
#include "kgctx/io.hpp"
#include "kgctx/relation.hpp"
#include "kgctx/text.hpp"

namespace kgctx {

// One ConceptNet edge. Self-loops are stored as-is; weight is the
// dimensionless ConceptNet edge weight, always >= 0.
struct Triple {
  ConceptId subject;
  RelationType relation = RelationType::Causes;
  ConceptId object;
  double weight = 0.0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct IngestReport {
  std::size_t read = 0;
  std::size_t kept = 0;
  std::size_t dropped_by_relation = 0;
  std::size_t dropped_by_language = 0;
  std::size_t malformed = 0;
  // Records that passed the filters but repeated an existing (s, r, o); the
  // stored triple keeps the maximum weight. Counted inside `kept`.
  std::size_t merged_duplicates = 0;
  // Warning, not an error: the filters kept nothing.
  bool empty_graph = false;
};

struct IngestOptions {
  // Restrict ingestion to a subset of the whitelist. Relations outside the
  // subset count as dropped_by_relation.
  std::optional<std::set<RelationType>> relation_filter;
};

class KnowledgeGraph {
 public:
  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  // Inserts a triple, keeping ingestion order. A repeated (s, r, o) merges
  // into the existing slot with the maximum weight; returns false in that
  // case.
  bool add_triple(Triple t) {
    std::string key = t.subject.str();
    key += '\t';
    key += to_string(t.relation);
    key += '\t';
    key += t.object.str();
    if (auto it = by_sro_.find(key); it != by_sro_.end()) {
      Triple& existing = triples_[it->second];
      if (t.weight > existing.weight) existing.weight = t.weight;
      return false;
    }
    auto index = static_cast<std::uint32_t>(triples_.size());
    by_sro_.emplace(std::move(key), index);
    by_subject_[t.subject.str()].push_back(index);
    by_object_[t.object.str()].push_back(index);
    by_pair_[pair_key(t.subject, t.object)].push_back(index);
    triples_.push_back(std::move(t));
    return true;
  }

  // Every triple where `e` appears as subject or object, deduplicated,
  // in ingestion order.
  std::vector<Triple> triples_containing(const ConceptId& e) const {
    std::vector<std::uint32_t> indices;
    if (auto it = by_subject_.find(e.str()); it != by_subject_.end())
      indices.insert(indices.end(), it->second.begin(), it->second.end());
    if (auto it = by_object_.find(e.str()); it != by_object_.end())
      indices.insert(indices.end(), it->second.begin(), it->second.end());
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    std::vector<Triple> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(triples_[i]);
    return out;
  }

  // Indices of triples with this exact (subject, object), ingestion order.
  // Returns nullptr when there are none.
  const std::vector<std::uint32_t>* find_by_pair(const ConceptId& subject,
                                                 const ConceptId& object) const {
    auto it = by_pair_.find(pair_key(subject, object));
    return it == by_pair_.end() ? nullptr : &it->second;
  }

  bool contains(const ConceptId& e) const {
    return by_subject_.contains(e.str()) || by_object_.contains(e.str());
  }

  // All node names, in first-appearance order.
  std::vector<ConceptId> vocabulary() const {
    std::vector<ConceptId> out;
    std::unordered_map<std::string, bool> seen;
    out.reserve(by_subject_.size() + by_object_.size());
    for (const Triple& t : triples_) {
      if (!seen[t.subject.str()]) {
        seen[t.subject.str()] = true;
        out.push_back(t.subject);
      }
      if (!seen[t.object.str()]) {
        seen[t.object.str()] = true;
        out.push_back(t.object);
      }
    }
    return out;
  }

  // --- persistence -------------------------------------------------------
  //
  // Line-based index file:
  //   kgctx.kg.index 1 <count>
  //   subject \t relation \t object \t weight
  // Weights use %.17g so reloading is bit-exact; writing the same graph
  // twice produces identical bytes.

  static constexpr std::string_view kIndexMagic = "kgctx.kg.index";
  static constexpr int kIndexVersion = 1;

  void save(std::ostream& out) const {
    out << kIndexMagic << ' ' << kIndexVersion << ' ' << triples_.size() << '\n';
    char buf[64];
    for (const Triple& t : triples_) {
      std::snprintf(buf, sizeof(buf), "%.17g", t.weight);
      out << t.subject.str() << '\t' << to_string(t.relation) << '\t'
          << t.object.str() << '\t' << buf << '\n';
    }
    if (!out) throw IoError("failed writing knowledge-graph index");
  }

  static KnowledgeGraph load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw IndexFormatError("empty knowledge-graph index");
    auto fields = text::split(header, ' ');
    if (fields.size() != 3 || fields[0] != kIndexMagic)
      throw IndexFormatError("not a knowledge-graph index file");
    if (fields[1] != std::to_string(kIndexVersion))
      throw IndexFormatError("unsupported knowledge-graph index version: " + std::string(fields[1]));

    KnowledgeGraph g;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cols = text::split(line, '\t');
      if (cols.size() != 4) throw IndexFormatError("bad index line: " + line);
      auto rel = parse_relation(cols[1]);
      if (!rel) throw IndexFormatError("unknown relation in index: " + std::string(cols[1]));
      char* end = nullptr;
      std::string wtext(cols[3]);
      double w = std::strtod(wtext.c_str(), &end);
      if (end == wtext.c_str() || *end != '\0' || !std::isfinite(w) || w < 0.0)
        throw IndexFormatError("bad weight in index: " + wtext);
      g.add_triple(Triple{normalize_concept(cols[0]), *rel, normalize_concept(cols[2]), w});
    }
    return g;
  }

  void save_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out.is_open()) throw IoError("cannot write index file: " + path.string());
    save(out);
  }

  static KnowledgeGraph load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open index file: " + path.string());
    return load(in);
  }

 private:
  static std::string pair_key(const ConceptId& s, const ConceptId& o) {
    std::string key = s.str();
    key += '\t';
    key += o.str();
    return key;
  }

  std::vector<Triple> triples_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> by_object_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> by_pair_;
  std::unordered_map<std::string, std::uint32_t> by_sro_;
};

struct IngestResult {
  KnowledgeGraph graph;
  IngestReport report;
};

namespace detail {

// Raw assertion rows: /a/[...] \t /r/Rel \t /c/lang/term \t /c/lang/term \t {json}
// Compact fixture rows: subject \t relation \t object \t weight
// Classification order per line: field structure -> language -> relation ->
// metadata/weight. Exactly one report bucket per line.
inline void ingest_line(std::string_view line, KnowledgeGraph& g, IngestReport& report,
                        const IngestOptions& options) {
  auto fields = text::split(line, '\t');

  std::string_view relation_field, subject_field, object_field;
  std::string_view weight_json;   // raw format only
  std::string_view weight_field;  // compact format only
  bool compact = false;

  if (fields.size() >= 5 && fields[1].starts_with("/r/") && fields[2].starts_with("/c/") &&
      fields[3].starts_with("/c/")) {
    relation_field = fields[1];
    subject_field = fields[2];
    object_field = fields[3];
    weight_json = fields[4];
  } else if (fields.size() == 4) {
    compact = true;
    subject_field = fields[0];
    relation_field = fields[1];
    object_field = fields[2];
    weight_field = fields[3];
  } else {
    ++report.malformed;
    return;
  }

  // Compact rows carry no language tag and are treated as English.
  if (!compact) {
    if (!subject_field.starts_with("/c/en/") || !object_field.starts_with("/c/en/")) {
      ++report.dropped_by_language;
      return;
    }
  }

  auto relation = parse_relation(relation_field);
  if (!relation || (options.relation_filter && !options.relation_filter->contains(*relation))) {
    ++report.dropped_by_relation;
    return;
  }

  double weight = 0.0;
  if (compact) {
    std::string wtext(weight_field);
    char* end = nullptr;
    weight = std::strtod(wtext.c_str(), &end);
    if (end == wtext.c_str() || *end != '\0') {
      ++report.malformed;
      return;
    }
  } else {
    auto meta = nlohmann::json::parse(weight_json, nullptr, /*allow_exceptions=*/false);
    if (meta.is_discarded() || !meta.is_object() || !meta.contains("weight") ||
        !meta["weight"].is_number()) {
      ++report.malformed;
      return;
    }
    weight = meta["weight"].get<double>();
  }
  if (!std::isfinite(weight) || weight < 0.0) {
    ++report.malformed;
    return;
  }

  try {
    Triple t{normalize_concept(subject_field), *relation, normalize_concept(object_field), weight};
    ++report.kept;
    if (!g.add_triple(std::move(t))) ++report.merged_duplicates;
  } catch (const InvalidConcept&) {
    ++report.malformed;
  }
}

}  // namespace detail

// Builds a KnowledgeGraph from an assertions dump. Malformed lines are
// counted, never fatal; blank lines are ignored. Throws IoError only when
// the source itself fails.
inline IngestResult ingest_dump(LineSource& source, const IngestOptions& options = {}) {
  IngestResult result;
  std::string line;
  while (source.next(line)) {
    if (text::trim(line).empty()) continue;
    ++result.report.read;
    detail::ingest_line(line, result.graph, result.report, options);
  }
  result.report.empty_graph = (result.report.kept == 0);
  return result;
}

inline IngestResult ingest_dump(std::istream& in, const IngestOptions& options = {}) {
  StreamLineSource source(in);
  return ingest_dump(source, options);
}

inline IngestResult ingest_dump_file(const std::filesystem::path& path,
                                     const IngestOptions& options = {}) {
  FileLineSource source(path);
  return ingest_dump(source, options);
}

}  // namespace kgctx
