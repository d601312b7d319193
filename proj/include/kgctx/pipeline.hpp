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

// Batch orchestration: dataset -> entity links -> triple selection ->
// descriptions -> assembled inputs -> stub-encoder scores. Stages exchange
// line-delimited JSON records so any stage can be swapped out or inspected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgctx/datasets.hpp"
#include "kgctx/dictionary.hpp"
#include "kgctx/entity_linker.hpp"
#include "kgctx/example_builder.hpp"
#include "kgctx/kg_store.hpp"
#include "kgctx/scorer.hpp"
#include "kgctx/triple_selector.hpp"

namespace kgctx {

struct PipelineConfig {
  std::filesystem::path conceptnet_dump;
  std::filesystem::path dictionary_dump;
  std::filesystem::path dataset;
  std::filesystem::path index_dir;
  std::filesystem::path output;
  DatasetProfile profile = DatasetProfile::Generic;
  std::size_t max_tokens = 192;
  std::uint64_t seed = 42;
  std::size_t ensemble_k = 1;
  std::optional<std::set<RelationType>> relation_whitelist;  // subset override

  static constexpr std::size_t kMinTokens = 16;
};

inline constexpr std::string_view kKgIndexFileName = "kg.index";
inline constexpr std::string_view kDictIndexFileName = "dict.index";

// One assembled (example, choice) record — the batch artifact any downstream
// trainer consumes.
struct AssembledRecord {
  std::string example_id;
  std::size_t choice_index = 0;
  AssembledInput input;
  SelectionBranch branch = SelectionBranch::NoTriple;
  MatchStage q_stage = MatchStage::Fallback;
  MatchStage c_stage = MatchStage::Fallback;
};

inline nlohmann::json to_json(const AssembledRecord& r) {
  nlohmann::json segments = nlohmann::json::array();
  for (const Segment& s : r.input.segments)
    segments.push_back({{"kind", to_string(s.kind)}, {"text", s.text}});
  return nlohmann::json{
      {"example_id", r.example_id},
      {"choice_index", r.choice_index},
      {"rendered", r.input.rendered},
      {"token_count", r.input.token_count},
      {"segments", std::move(segments)},
      {"selection_branch", to_string(r.branch)},
      {"match_stages",
       {{"question", to_string(r.q_stage)}, {"choice", to_string(r.c_stage)}}},
  };
}

inline AssembledRecord assembled_record_from_json(const nlohmann::json& j) {
  AssembledRecord r;
  r.example_id = j.at("example_id").get<std::string>();
  r.choice_index = j.at("choice_index").get<std::size_t>();
  r.input.rendered = j.at("rendered").get<std::string>();
  r.input.token_count = j.at("token_count").get<std::size_t>();
  for (const auto& s : j.at("segments")) {
    auto kind = parse_segment_kind(s.at("kind").get<std::string>());
    if (!kind) throw Error("unknown segment kind in record");
    r.input.segments.push_back({*kind, s.at("text").get<std::string>()});
  }
  auto branch = parse_selection_branch(j.at("selection_branch").get<std::string>());
  auto qs = parse_match_stage(j.at("match_stages").at("question").get<std::string>());
  auto cs = parse_match_stage(j.at("match_stages").at("choice").get<std::string>());
  if (!branch || !qs || !cs) throw Error("unknown enum value in record");
  r.branch = *branch;
  r.q_stage = *qs;
  r.c_stage = *cs;
  return r;
}

// Routing summary printed after assembly.
struct AssembleSummary {
  std::size_t examples = 0;
  std::size_t records = 0;
  std::map<std::string, std::size_t> branches;
  std::map<std::string, std::size_t> q_stages;
  std::map<std::string, std::size_t> c_stages;
};

// Builds every (example, choice) record. CommonsenseQA-style examples use
// the provided entities; examples without a question concept go through
// mining against the graph vocabulary.
inline std::vector<AssembledRecord> assemble_dataset(const KnowledgeGraph& graph,
                                                     const DictionaryIndex& dictionary,
                                                     std::span<const QAExample> examples,
                                                     std::size_t max_tokens,
                                                     AssembleSummary* summary = nullptr) {
  const ConceptVocabulary vocab = ConceptVocabulary::from_graph(graph);
  BuildOptions opts;
  opts.max_tokens = max_tokens;

  std::vector<AssembledRecord> out;
  for (const QAExample& ex : examples) {
    for (std::size_t ci = 0; ci < ex.choices.size(); ++ci) {
      EntityLink link;
      if (ex.question_concept) {
        link = link_provided(*ex.question_concept, ex.choices[ci].text);
      } else {
        static const std::vector<std::string> kNoFacts;
        const auto& facts = ex.facts ? *ex.facts : kNoFacts;
        auto mined = mine_entities(ex.question, ex.choices[ci].text, facts, vocab);
        try {
          link = link_mined(mined, graph, ex.question);
        } catch (const NoEntityFound&) {
          // Nothing mined from the choice: fall back to normalized texts so
          // the pipeline stays total.
          link.question_entity = fallback_question_entity(ex.question);
          if (link.question_entity.empty()) link.question_entity = normalize_concept(ex.question);
          link.choice_entity = normalize_concept(ex.choices[ci].text);
          link.source = LinkSource::Fallback;
        }
      }

      SelectionResult sel = select_triple(graph, link.question_entity, link.choice_entity);
      Description d_q = lookup_description(dictionary, link.question_entity);
      Description d_c = lookup_description(dictionary, link.choice_entity);

      AssembledRecord rec;
      rec.example_id = ex.id;
      rec.choice_index = ci;
      rec.input = build_input(ex, ci, link, sel, d_q, d_c, opts);
      rec.branch = sel.branch;
      rec.q_stage = d_q.match_stage;
      rec.c_stage = d_c.match_stage;

      if (summary != nullptr) {
        ++summary->records;
        ++summary->branches[std::string(to_string(rec.branch))];
        ++summary->q_stages[std::string(to_string(rec.q_stage))];
        ++summary->c_stages[std::string(to_string(rec.c_stage))];
      }
      out.push_back(std::move(rec));
    }
    if (summary != nullptr) ++summary->examples;
  }
  return out;
}

inline void write_assembled(std::ostream& out, std::span<const AssembledRecord> records) {
  for (const AssembledRecord& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw IoError("failed writing assembled records");
}

inline std::vector<AssembledRecord> read_assembled(std::istream& in) {
  std::vector<AssembledRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FatalFormat("invalid assembled record: " + line);
    out.push_back(assembled_record_from_json(j));
  }
  return out;
}

// Per-example score record emitted by the scoring stage.
struct ScoreRecord {
  std::string example_id;
  std::vector<double> logits;
  std::vector<double> probabilities;
  std::size_t predicted_index = 0;
};

inline nlohmann::json to_json(const ScoreRecord& r) {
  return nlohmann::json{{"example_id", r.example_id},
                        {"logits", r.logits},
                        {"probabilities", r.probabilities},
                        {"predicted_index", r.predicted_index}};
}

// Assembled records grouped back into examples, preserving input order.
// Records for one example must be contiguous, as assemble_dataset emits them.
struct ExampleGroup {
  std::string example_id;
  std::vector<const AssembledRecord*> records;
};

inline std::vector<ExampleGroup> group_by_example(std::span<const AssembledRecord> records) {
  std::vector<ExampleGroup> groups;
  for (const AssembledRecord& r : records) {
    if (groups.empty() || groups.back().example_id != r.example_id)
      groups.push_back(ExampleGroup{r.example_id, {}});
    groups.back().records.push_back(&r);
  }
  return groups;
}

// Scores every example with one model: any encoder behind the port plus a
// parameter set for the pooling head.
inline std::vector<ScoreRecord> score_assembled(std::span<const AssembledRecord> records,
                                                const EncoderPort& encoder,
                                                const PoolingParams& params) {
  std::vector<ScoreRecord> out;
  for (const ExampleGroup& group : group_by_example(records)) {
    std::vector<std::vector<double>> pooled;
    pooled.reserve(group.records.size());
    for (const AssembledRecord* r : group.records)
      pooled.push_back(attention_pool(encoder.encode(r->input.rendered), params.u).pooled);
    ChoiceScores scores = score_choices(pooled, params.b);

    ScoreRecord rec;
    rec.example_id = group.example_id;
    rec.logits = scores.logits;
    rec.probabilities = scores.probabilities;
    rec.predicted_index = static_cast<std::size_t>(
        std::max_element(scores.probabilities.begin(), scores.probabilities.end()) -
        scores.probabilities.begin());
    out.push_back(std::move(rec));
  }
  return out;
}

// Stub-encoder convenience: one seed fixes both the encoder and the head
// parameters.
inline std::vector<ScoreRecord> score_assembled(std::span<const AssembledRecord> records,
                                                std::size_t dim, std::uint64_t seed) {
  const StubEncoder encoder(dim, seed);
  return score_assembled(records, encoder, init_pooling_params(dim, seed));
}

// Ensemble result for one example: per-seed votes plus their majority.
struct EnsembleRecord {
  std::string example_id;
  std::vector<std::size_t> votes;
  std::size_t ensemble_prediction = 0;
};

inline nlohmann::json to_json(const EnsembleRecord& r) {
  return nlohmann::json{{"example_id", r.example_id},
                        {"votes", r.votes},
                        {"ensemble_prediction", r.ensemble_prediction}};
}

// Runs k models seeded seed, seed+1, ... and majority-votes per example.
inline std::vector<EnsembleRecord> ensemble_score(std::span<const AssembledRecord> records,
                                                  std::size_t dim, std::uint64_t seed,
                                                  std::size_t k) {
  std::vector<std::vector<ScoreRecord>> per_model;
  per_model.reserve(k);
  for (std::size_t m = 0; m < k; ++m)
    per_model.push_back(score_assembled(records, dim, seed + m));

  std::vector<EnsembleRecord> out;
  if (per_model.empty()) return out;
  for (std::size_t i = 0; i < per_model.front().size(); ++i) {
    EnsembleRecord rec;
    rec.example_id = per_model.front()[i].example_id;
    for (std::size_t m = 0; m < k; ++m) rec.votes.push_back(per_model[m][i].predicted_index);
    rec.ensemble_prediction = ensemble_vote(rec.votes);
    out.push_back(std::move(rec));
  }
  return out;
}

// Fraction of labeled examples predicted correctly; nullopt when no example
// carries a label. `predictions` maps example_id -> predicted index.
inline std::optional<double> accuracy(std::span<const QAExample> examples,
                                      const std::map<std::string, std::size_t>& predictions) {
  std::size_t labeled = 0;
  std::size_t correct = 0;
  for (const QAExample& ex : examples) {
    if (!ex.answer_index) continue;
    auto it = predictions.find(ex.id);
    if (it == predictions.end()) continue;
    ++labeled;
    if (it->second == *ex.answer_index) ++correct;
  }
  if (labeled == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(labeled);
}

}  // namespace kgctx
