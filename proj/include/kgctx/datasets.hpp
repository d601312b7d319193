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

// Multiple-choice QA dataset readers. Accepts the official CommonsenseQA and
// OpenBookQA line-delimited formats plus a permissive generic profile, and
// emits normalized records for downstream stages.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgctx/concept.hpp"
#include "kgctx/errors.hpp"
#include "kgctx/io.hpp"

namespace kgctx {

enum class DatasetProfile { Csqa, Obqa, Generic };

inline std::string_view to_string(DatasetProfile p) {
  switch (p) {
    case DatasetProfile::Csqa: return "csqa";
    case DatasetProfile::Obqa: return "obqa";
    case DatasetProfile::Generic: return "generic";
  }
  return "generic";
}

inline std::optional<DatasetProfile> parse_dataset_profile(std::string_view s) {
  if (s == "csqa") return DatasetProfile::Csqa;
  if (s == "obqa") return DatasetProfile::Obqa;
  if (s == "generic") return DatasetProfile::Generic;
  return std::nullopt;
}

struct Choice {
  std::string text;
  std::optional<std::string> concept_name;  // reserved for datasets that ship one
  std::string label;                        // "A".."E" when the source has labels
};

struct QAExample {
  std::string id;
  std::string question;
  std::vector<Choice> choices;
  std::optional<ConceptId> question_concept;
  std::optional<std::vector<std::string>> facts;  // top retrieved facts, when shipped
  std::optional<std::size_t> answer_index;        // absent on unlabeled splits
};

struct RecordError {
  std::size_t line = 0;  // 1-based line number in the stream
  std::string message;
};

struct ValidationReport {
  std::size_t lines_read = 0;
  std::size_t parsed = 0;
  std::vector<RecordError> errors;
  std::map<std::size_t, std::size_t> choices_histogram;
  std::size_t with_facts = 0;
  bool empty_dataset = false;
};

struct ReadResult {
  std::vector<QAExample> examples;
  ValidationReport report;
};

namespace detail {

inline std::optional<std::size_t> label_to_index(const std::vector<Choice>& choices,
                                                 std::string_view key) {
  for (std::size_t i = 0; i < choices.size(); ++i)
    if (!choices[i].label.empty() && choices[i].label == key) return i;
  // No labels matched: interpret a single letter positionally.
  if (key.size() == 1 && key[0] >= 'A' && key[0] <= 'Z') {
    auto idx = static_cast<std::size_t>(key[0] - 'A');
    if (idx < choices.size()) return idx;
  }
  return std::nullopt;
}

inline QAExample parse_record(const nlohmann::json& rec, DatasetProfile profile) {
  QAExample ex;
  if (!rec.is_object()) throw Error("record is not an object");
  ex.id = rec.value("id", "");
  if (ex.id.empty()) throw Error("missing id");

  const nlohmann::json* choices_node = nullptr;
  if (rec.contains("question") && rec["question"].is_object()) {
    const auto& q = rec["question"];
    ex.question = q.value("stem", "");
    if (q.contains("question_concept") && q["question_concept"].is_string())
      ex.question_concept = normalize_concept(q["question_concept"].get<std::string>());
    if (q.contains("choices")) choices_node = &q["choices"];
  } else if (rec.contains("question") && rec["question"].is_string()) {
    ex.question = rec["question"].get<std::string>();
  }
  if (ex.question.empty()) throw Error("missing question stem");
  if (rec.contains("question_concept") && rec["question_concept"].is_string())
    ex.question_concept = normalize_concept(rec["question_concept"].get<std::string>());
  if (choices_node == nullptr && rec.contains("choices")) choices_node = &rec["choices"];
  if (choices_node == nullptr || !choices_node->is_array()) throw Error("missing choices");

  for (const auto& c : *choices_node) {
    Choice choice;
    if (c.is_string()) {
      choice.text = c.get<std::string>();
    } else if (c.is_object()) {
      choice.text = c.value("text", "");
      choice.label = c.value("label", "");
      if (c.contains("concept") && c["concept"].is_string())
        choice.concept_name = c["concept"].get<std::string>();
    }
    if (choice.text.empty()) throw Error("choice with empty text");
    ex.choices.push_back(std::move(choice));
  }

  switch (profile) {
    case DatasetProfile::Csqa:
      if (ex.choices.size() != 5) throw Error("csqa record must have 5 choices");
      if (!ex.question_concept) throw Error("csqa record missing question_concept");
      break;
    case DatasetProfile::Obqa:
      if (ex.choices.size() != 4) throw Error("obqa record must have 4 choices");
      break;
    case DatasetProfile::Generic:
      if (ex.choices.size() < 2 || ex.choices.size() > 8)
        throw Error("generic record must have 2..8 choices");
      break;
  }

  if (rec.contains("facts") && rec["facts"].is_array()) {
    std::vector<std::string> facts;
    for (const auto& f : rec["facts"])
      if (f.is_string()) facts.push_back(f.get<std::string>());
    ex.facts = std::move(facts);
  }

  if (rec.contains("answerKey") && rec["answerKey"].is_string()) {
    const auto key = rec["answerKey"].get<std::string>();
    if (!key.empty()) {
      auto idx = label_to_index(ex.choices, key);
      if (!idx) throw Error("answerKey does not match any choice: " + key);
      ex.answer_index = *idx;
    }
  } else if (rec.contains("answer_index") && rec["answer_index"].is_number_unsigned()) {
    auto idx = rec["answer_index"].get<std::size_t>();
    if (idx >= ex.choices.size()) throw Error("answer_index out of range");
    ex.answer_index = idx;
  }

  return ex;
}

}  // namespace detail

// Reads a line-delimited dataset. Bad records become per-record error
// entries; more than 10% bad records throws FatalFormat. An empty stream is
// flagged, not fatal.
inline ReadResult read_dataset(LineSource& source, DatasetProfile profile) {
  ReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (source.next(line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    ++result.report.lines_read;
    auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded()) {
      result.report.errors.push_back({line_no, "invalid JSON"});
      continue;
    }
    try {
      QAExample ex = detail::parse_record(rec, profile);
      result.report.choices_histogram[ex.choices.size()]++;
      if (ex.facts && !ex.facts->empty()) ++result.report.with_facts;
      result.examples.push_back(std::move(ex));
      ++result.report.parsed;
    } catch (const std::exception& e) {
      result.report.errors.push_back({line_no, e.what()});
    }
  }
  result.report.empty_dataset = (result.report.lines_read == 0);
  if (result.report.errors.size() * 10 > result.report.lines_read)
    throw FatalFormat("more than 10% malformed records (" +
                      std::to_string(result.report.errors.size()) + " of " +
                      std::to_string(result.report.lines_read) + ")");
  return result;
}

inline ReadResult read_dataset(std::istream& in, DatasetProfile profile) {
  StreamLineSource source(in);
  return read_dataset(source, profile);
}

inline ReadResult read_dataset_file(const std::filesystem::path& path, DatasetProfile profile) {
  FileLineSource source(path);
  return read_dataset(source, profile);
}

struct SplitStats {
  std::size_t count = 0;
  std::map<std::size_t, std::size_t> choices_histogram;
  std::size_t with_facts_count = 0;
};

inline SplitStats split_stats(std::span<const QAExample> examples) {
  SplitStats stats;
  stats.count = examples.size();
  for (const QAExample& ex : examples) {
    stats.choices_histogram[ex.choices.size()]++;
    if (ex.facts && !ex.facts->empty()) ++stats.with_facts_count;
  }
  return stats;
}

// Normalized QAExample record, the documented line format this library emits
// for datasets (version field guards future schema changes).
inline nlohmann::json to_json(const QAExample& ex) {
  nlohmann::json rec{{"v", 1}, {"id", ex.id}, {"question", ex.question}};
  auto& choices = rec["choices"] = nlohmann::json::array();
  for (const Choice& c : ex.choices) {
    nlohmann::json cj{{"text", c.text}};
    if (!c.label.empty()) cj["label"] = c.label;
    if (c.concept_name) cj["concept"] = *c.concept_name;
    choices.push_back(std::move(cj));
  }
  if (ex.question_concept) rec["question_concept"] = ex.question_concept->str();
  if (ex.facts) rec["facts"] = *ex.facts;
  if (ex.answer_index) rec["answer_index"] = *ex.answer_index;
  return rec;
}

inline void write_examples(std::ostream& out, std::span<const QAExample> examples) {
  for (const QAExample& ex : examples) out << to_json(ex).dump() << '\n';
  if (!out) throw IoError("failed writing normalized examples");
}

}  // namespace kgctx
