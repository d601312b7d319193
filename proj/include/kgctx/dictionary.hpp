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

// Definition lookup with a three-stage matching cascade: a concept is tried
// in its original form, then its lemma form, then its base (last) word. The
// first definition entry of the first hit wins. Lookups never fail — a miss
// falls back to the concept's own surface form — so every concept gets a
// description. The index is immutable after build; concurrent lookups are
// safe.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kgctx/concept.hpp"
#include "kgctx/errors.hpp"
#include "kgctx/io.hpp"
#include "kgctx/lemmatizer.hpp"
#include "kgctx/text.hpp"

namespace kgctx {

class DictionaryIndex {
 public:
  // Adds or merges an entry. Terms are normalized to lowercase single-space
  // word lists; duplicate terms concatenate definitions in arrival order.
  void add_entry(std::string_view term, std::vector<std::string> definitions) {
    std::string key = normalize_term(term);
    auto [it, inserted] = entries_.try_emplace(key);
    if (inserted) order_.push_back(key);
    auto& defs = it->second;
    defs.insert(defs.end(), std::make_move_iterator(definitions.begin()),
                std::make_move_iterator(definitions.end()));
  }

  // Definition list for a term (source order), or nullptr.
  const std::vector<std::string>* find(std::string_view term) const {
    auto it = entries_.find(normalize_term(term));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t entry_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Terms in first-seen order; drives deterministic persistence.
  const std::vector<std::string>& terms() const { return order_; }

  static std::string normalize_term(std::string_view term) {
    return text::join(text::whitespace_tokens(text::to_lower(term)), " ");
  }

  // --- persistence -------------------------------------------------------
  //
  // JSON-lines index with a versioned header record.

  static constexpr std::string_view kIndexMagic = "kgctx.dict.index";
  static constexpr int kIndexVersion = 1;

  void save(std::ostream& out) const {
    nlohmann::json header{{"format", kIndexMagic}, {"version", kIndexVersion},
                          {"entries", entries_.size()}};
    out << header.dump() << '\n';
    for (const std::string& term : order_) {
      nlohmann::json rec{{"term", term}, {"definitions", entries_.at(term)}};
      out << rec.dump() << '\n';
    }
    if (!out) throw IoError("failed writing dictionary index");
  }

  static DictionaryIndex load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IndexFormatError("empty dictionary index");
    auto header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != kIndexMagic)
      throw IndexFormatError("not a dictionary index file");
    if (header.value("version", -1) != kIndexVersion)
      throw IndexFormatError("unsupported dictionary index version");

    DictionaryIndex idx;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto rec = nlohmann::json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.contains("term") || !rec.contains("definitions"))
        throw IndexFormatError("bad dictionary index record: " + line);
      idx.add_entry(rec["term"].get<std::string>(),
                    rec["definitions"].get<std::vector<std::string>>());
    }
    return idx;
  }

  void save_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out.is_open()) throw IoError("cannot write index file: " + path.string());
    save(out);
  }

  static DictionaryIndex load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open index file: " + path.string());
    return load(in);
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
  std::vector<std::string> order_;
};

struct DictionaryIngestReport {
  std::size_t read = 0;
  std::size_t indexed = 0;  // records merged into the index
  std::size_t malformed = 0;
};

struct DictionaryIngestResult {
  DictionaryIndex index;
  DictionaryIngestReport report;
};

// Reads line-delimited {"term": ..., "definitions": [...]} records.
// Records missing a term or a non-empty definitions list are skipped and
// counted, never fatal.
inline DictionaryIngestResult ingest_dictionary(LineSource& source) {
  DictionaryIngestResult result;
  std::string line;
  while (source.next(line)) {
    if (text::trim(line).empty()) continue;
    ++result.report.read;
    auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("term") ||
        !rec["term"].is_string() || !rec.contains("definitions") ||
        !rec["definitions"].is_array() || rec["definitions"].empty()) {
      ++result.report.malformed;
      continue;
    }
    std::vector<std::string> defs;
    defs.reserve(rec["definitions"].size());
    bool ok = true;
    for (const auto& d : rec["definitions"]) {
      if (!d.is_string()) {
        ok = false;
        break;
      }
      defs.push_back(d.get<std::string>());
    }
    std::string term = rec["term"].get<std::string>();
    if (!ok || DictionaryIndex::normalize_term(term).empty()) {
      ++result.report.malformed;
      continue;
    }
    result.index.add_entry(term, std::move(defs));
    ++result.report.indexed;
  }
  return result;
}

inline DictionaryIngestResult ingest_dictionary(std::istream& in) {
  StreamLineSource source(in);
  return ingest_dictionary(source);
}

inline DictionaryIngestResult ingest_dictionary_file(const std::filesystem::path& path) {
  FileLineSource source(path);
  return ingest_dictionary(source);
}

enum class MatchStage {
  Original,
  Lemma,
  BaseWord,
  Fallback,
};

inline std::string_view to_string(MatchStage s) {
  switch (s) {
    case MatchStage::Original: return "original";
    case MatchStage::Lemma: return "lemma";
    case MatchStage::BaseWord: return "base_word";
    case MatchStage::Fallback: return "fallback";
  }
  return "fallback";
}

inline std::optional<MatchStage> parse_match_stage(std::string_view s) {
  if (s == "original") return MatchStage::Original;
  if (s == "lemma") return MatchStage::Lemma;
  if (s == "base_word") return MatchStage::BaseWord;
  if (s == "fallback") return MatchStage::Fallback;
  return std::nullopt;
}

// A concept paired with the definition text retrieved for it.
struct Description {
  ConceptId concept_id;
  std::string matched_term;  // empty when match_stage == Fallback
  MatchStage match_stage = MatchStage::Fallback;
  std::string text;
};

// Cascade lookup: original form, lemma form, base word, lemmatized base
// word; each hit returns the matched entry's first definition. Total: when
// everything misses, the concept's surface form doubles as its description.
inline Description lookup_description(const DictionaryIndex& idx, const ConceptId& e,
                                      const Lemmatizer& lemmatizer = {}) {
  const std::string surface = e.surface();
  auto lemma_of = [&](std::string_view phrase) {
    return lemmatizer ? lemmatizer(phrase) : lemmatize(phrase);
  };

  auto try_term = [&](const std::string& term, MatchStage stage,
                      Description& out) {
    const auto* defs = idx.find(term);
    if (defs == nullptr || defs->empty()) return false;
    out = Description{e, DictionaryIndex::normalize_term(term), stage, defs->front()};
    return true;
  };

  Description out;
  if (try_term(surface, MatchStage::Original, out)) return out;

  const std::string lemma = lemma_of(surface);
  if (lemma != surface && try_term(lemma, MatchStage::Lemma, out)) return out;

  auto words = text::whitespace_tokens(surface);
  if (!words.empty()) {
    const std::string base = words.back();
    if (base != surface && try_term(base, MatchStage::BaseWord, out)) return out;
    const std::string base_lemma = lemma_of(base);
    if (base_lemma != base && base_lemma != lemma &&
        try_term(base_lemma, MatchStage::BaseWord, out))
      return out;
  }

  return Description{e, "", MatchStage::Fallback, surface};
}

}  // namespace kgctx
