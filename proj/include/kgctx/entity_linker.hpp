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

// Question/choice entity determination. CommonsenseQA ships its entities, so
// linking is a pass-through; OpenBookQA entities are mined by greedy
// longest-match against the graph vocabulary and ranked by how often they
// occur in the example's retrieved facts.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgctx/concept.hpp"
#include "kgctx/errors.hpp"
#include "kgctx/kg_store.hpp"
#include "kgctx/text.hpp"

namespace kgctx {

enum class LinkSource {
  Provided,  // dataset supplied both entities
  Mined,     // entities extracted from text
  Fallback,  // no question entity could be mined; first content word used
};

inline std::string_view to_string(LinkSource s) {
  switch (s) {
    case LinkSource::Provided: return "provided";
    case LinkSource::Mined: return "mined";
    case LinkSource::Fallback: return "fallback";
  }
  return "provided";
}

struct EntityLink {
  ConceptId question_entity;            // e_q
  ConceptId choice_entity;              // e_c
  std::size_t q_occurrences = 0;        // occurrences of e_q in retrieved facts
  std::size_t c_occurrences = 0;        // occurrences of e_c in retrieved facts
  LinkSource source = LinkSource::Provided;
};

// Pass-through linking for datasets that supply the entities. The choice
// text is normalized into the choice entity. Throws InvalidChoice when the
// choice text normalizes to nothing.
inline EntityLink link_provided(const ConceptId& question_concept, std::string_view choice_text) {
  if (question_concept.empty()) throw InvalidConcept("question concept is empty");
  try {
    return EntityLink{question_concept, normalize_concept(choice_text), 0, 0,
                      LinkSource::Provided};
  } catch (const InvalidConcept&) {
    throw InvalidChoice("choice text normalizes to nothing: " + std::string(choice_text));
  }
}

enum class MentionRole { Question, Choice };

struct MinedEntity {
  ConceptId concept_id;
  MentionRole role = MentionRole::Question;
  std::size_t occurrences = 0;  // word-boundary, case-insensitive count in facts
};

// Graph vocabulary packaged for phrase matching.
class ConceptVocabulary {
 public:
  static ConceptVocabulary from_graph(const KnowledgeGraph& g) {
    ConceptVocabulary v;
    for (const ConceptId& c : g.vocabulary()) v.insert(c);
    return v;
  }

  void insert(const ConceptId& c) { concepts_.insert(c.str()); }
  bool contains(const std::string& underscored) const { return concepts_.contains(underscored); }
  std::size_t size() const { return concepts_.size(); }
  bool empty() const { return concepts_.empty(); }

 private:
  std::unordered_set<std::string> concepts_;
};

namespace detail {

// Longest phrases win; a span consumed by a match is never re-matched.
inline constexpr std::size_t kMaxPhraseWords = 4;

inline std::vector<ConceptId> match_concepts(std::string_view txt, const ConceptVocabulary& vocab) {
  auto words = text::word_tokens(txt);
  std::vector<ConceptId> out;
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t matched = 0;
    const std::size_t max_n = std::min(kMaxPhraseWords, words.size() - i);
    for (std::size_t n = max_n; n >= 1; --n) {
      std::string candidate = words[i];
      for (std::size_t k = 1; k < n; ++k) {
        candidate += '_';
        candidate += words[i + k];
      }
      if (vocab.contains(candidate)) {
        if (seen.insert(candidate).second) out.push_back(normalize_concept(candidate));
        matched = n;
        break;
      }
    }
    i += matched > 0 ? matched : 1;
  }
  return out;
}

// Sliding-window count of the concept's word sequence over one fact's
// tokens. Overlapping matches count; phrases never span fact boundaries.
inline std::size_t count_in_tokens(std::span<const std::string> fact_tokens,
                                   std::span<const std::string> words) {
  if (words.empty() || fact_tokens.size() < words.size()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + words.size() <= fact_tokens.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (fact_tokens[i + k] != words[k]) {
        hit = false;
        break;
      }
    }
    if (hit) ++count;
  }
  return count;
}

}  // namespace detail

// Identifies graph concepts in the question and choice text by greedy
// longest-match over word n-grams (up to 4 words), then counts each
// concept's occurrences across the retrieved facts. Question-role entries
// come first, in match order, then choice-role entries.
inline std::vector<MinedEntity> mine_entities(std::string_view question, std::string_view choice,
                                              std::span<const std::string> facts,
                                              const ConceptVocabulary& vocab) {
  std::vector<std::vector<std::string>> fact_tokens;
  fact_tokens.reserve(facts.size());
  for (const std::string& f : facts) fact_tokens.push_back(text::word_tokens(f));

  auto occurrences_of = [&](const ConceptId& c) {
    const auto words = text::split(c.str(), '_');
    std::vector<std::string> word_list;
    word_list.reserve(words.size());
    for (auto w : words) word_list.emplace_back(w);
    std::size_t total = 0;
    for (const auto& toks : fact_tokens) total += detail::count_in_tokens(toks, word_list);
    return total;
  };

  std::vector<MinedEntity> out;
  for (const ConceptId& c : detail::match_concepts(question, vocab))
    out.push_back(MinedEntity{c, MentionRole::Question, occurrences_of(c)});
  for (const ConceptId& c : detail::match_concepts(choice, vocab))
    out.push_back(MinedEntity{c, MentionRole::Choice, occurrences_of(c)});
  return out;
}

namespace detail {

inline const std::unordered_set<std::string>& stop_words() {
  static const std::unordered_set<std::string> words = {
      "a",    "an",   "the",  "of",    "in",    "on",    "at",   "to",   "for",
      "and",  "or",   "is",   "are",   "was",   "were",  "be",   "been", "being",
      "what", "which", "who",  "whom",  "where", "when",  "why",  "how",  "do",
      "does", "did",  "can",  "could", "will",  "would", "shall", "should", "may",
      "might", "must", "this", "that",  "these", "those", "it",   "its",  "with",
      "from", "by",   "as",   "have",  "has",   "had",   "not",  "no",   "nor",
      "you",  "your", "they", "their", "we",    "our",   "i",    "my",   "he",
      "she",  "his",  "her",  "them",  "us",    "if",
  };
  return words;
}

}  // namespace detail

// First non-stop-word of the text, normalized; empty when there is none.
inline ConceptId fallback_question_entity(std::string_view question_text) {
  for (const std::string& w : text::word_tokens(question_text)) {
    if (!detail::stop_words().contains(w)) return normalize_concept(w);
  }
  return ConceptId{};
}

// Fixes (e_q, e_c) from mined entities. Among graph edges whose subject is a
// question-role entity and whose object is a choice-role entity, the edge
// maximizing q-occurrences + c-occurrences wins (ties: higher edge weight,
// then ingestion order). With no such edge, the most-occurring entities of
// each role are used directly; with no question-role entity at all, the
// question's first content word stands in and the link is marked Fallback.
// Throws NoEntityFound when no choice-role entity exists.
inline EntityLink link_mined(std::span<const MinedEntity> mined, const KnowledgeGraph& g,
                             std::string_view question_text = {}) {
  std::vector<const MinedEntity*> q_entities, c_entities;
  for (const MinedEntity& m : mined) {
    (m.role == MentionRole::Question ? q_entities : c_entities).push_back(&m);
  }
  if (c_entities.empty()) throw NoEntityFound("no choice-role entity mined");

  const MinedEntity* best_q = nullptr;
  const MinedEntity* best_c = nullptr;
  std::size_t best_sum = 0;
  double best_edge_weight = 0.0;
  std::uint32_t best_edge_index = 0;
  for (const MinedEntity* q : q_entities) {
    for (const MinedEntity* c : c_entities) {
      const auto* edges = g.find_by_pair(q->concept_id, c->concept_id);
      if (edges == nullptr) continue;
      for (std::uint32_t idx : *edges) {
        const std::size_t sum = q->occurrences + c->occurrences;
        const double w = g.triples()[idx].weight;
        const bool better =
            best_q == nullptr || sum > best_sum ||
            (sum == best_sum && (w > best_edge_weight ||
                                 (w == best_edge_weight && idx < best_edge_index)));
        if (better) {
          best_q = q;
          best_c = c;
          best_sum = sum;
          best_edge_weight = w;
          best_edge_index = idx;
        }
      }
    }
  }
  if (best_q != nullptr) {
    return EntityLink{best_q->concept_id, best_c->concept_id, best_q->occurrences,
                      best_c->occurrences, LinkSource::Mined};
  }

  auto most_occurring = [](const std::vector<const MinedEntity*>& v) {
    const MinedEntity* best = v.front();
    for (const MinedEntity* m : v)
      if (m->occurrences > best->occurrences) best = m;
    return best;
  };

  const MinedEntity* c = most_occurring(c_entities);
  if (!q_entities.empty()) {
    const MinedEntity* q = most_occurring(q_entities);
    return EntityLink{q->concept_id, c->concept_id, q->occurrences, c->occurrences, LinkSource::Mined};
  }

  ConceptId e_q = fallback_question_entity(question_text);
  if (e_q.empty()) e_q = c->concept_id;  // degenerate input: no usable question text
  return EntityLink{e_q, c->concept_id, 0, c->occurrences, LinkSource::Fallback};
}

}  // namespace kgctx
