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

// Triple selection for a (question entity, choice entity) pair.
//
// A direct edge from the question entity to the choice entity wins outright
// (highest weight among parallel edges). Otherwise every triple containing
// the choice entity is scored
//
//     score = weight * N / N_rel
//
// where N is the candidate count and N_rel the number of candidates sharing
// the triple's relation type, so rarer relation types score higher, and the
// argmax is chosen. All functions here are pure over an immutable graph.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kgctx/concept.hpp"
#include "kgctx/errors.hpp"
#include "kgctx/kg_store.hpp"
#include "kgctx/relation.hpp"

namespace kgctx {

struct ScoredTriple {
  Triple triple;
  std::size_t n_total = 0;     // N: candidate-set size
  std::size_t n_relation = 0;  // N_rel: candidates sharing this relation type
  double type_weight = 0.0;    // N / N_rel
  double score = 0.0;          // weight * type_weight
};

enum class SelectionBranch {
  DirectEdge,
  ScoredFallback,
  NoTriple,
};

inline std::string_view to_string(SelectionBranch b) {
  switch (b) {
    case SelectionBranch::DirectEdge: return "direct_edge";
    case SelectionBranch::ScoredFallback: return "scored_fallback";
    case SelectionBranch::NoTriple: return "no_triple";
  }
  return "no_triple";
}

inline std::optional<SelectionBranch> parse_selection_branch(std::string_view s) {
  if (s == "direct_edge") return SelectionBranch::DirectEdge;
  if (s == "scored_fallback") return SelectionBranch::ScoredFallback;
  if (s == "no_triple") return SelectionBranch::NoTriple;
  return std::nullopt;
}

struct SelectionResult {
  std::optional<ScoredTriple> chosen;
  SelectionBranch branch = SelectionBranch::NoTriple;
  // Scored candidate set, input order. Empty for DirectEdge and NoTriple.
  std::vector<ScoredTriple> candidates;
};

// Scores a candidate set, preserving input order. Throws EmptyCandidates on
// an empty list.
inline std::vector<ScoredTriple> score_candidates(std::span<const Triple> triples) {
  if (triples.empty()) throw EmptyCandidates("no candidate triples to score");

  std::array<std::size_t, kRelationCount> relation_counts{};
  for (const Triple& t : triples) ++relation_counts[static_cast<std::size_t>(t.relation)];

  const auto n_total = triples.size();
  std::vector<ScoredTriple> out;
  out.reserve(n_total);
  for (const Triple& t : triples) {
    const std::size_t n_rel = relation_counts[static_cast<std::size_t>(t.relation)];
    const double type_weight = static_cast<double>(n_total) / static_cast<double>(n_rel);
    out.push_back(ScoredTriple{t, n_total, n_rel, type_weight, t.weight * type_weight});
  }
  return out;
}

// Picks the triple for (e_q, e_c).
//
// Direct-edge check is e_q -> e_c only; parallel edges resolve to the highest
// weight, earliest ingestion order. The fallback argmax breaks ties by score,
// then weight, then ingestion order, so results are reproducible.
inline SelectionResult select_triple(const KnowledgeGraph& g, const ConceptId& e_q,
                                     const ConceptId& e_c) {
  if (const auto* direct = g.find_by_pair(e_q, e_c); direct != nullptr && !direct->empty()) {
    const Triple* best = &g.triples()[direct->front()];
    for (auto idx : *direct) {
      const Triple& t = g.triples()[idx];
      if (t.weight > best->weight) best = &t;
    }
    // Degenerate one-candidate scoring keeps the ScoredTriple invariants.
    return SelectionResult{ScoredTriple{*best, 1, 1, 1.0, best->weight},
                           SelectionBranch::DirectEdge,
                           {}};
  }

  auto candidates = g.triples_containing(e_c);
  if (candidates.empty()) return SelectionResult{std::nullopt, SelectionBranch::NoTriple, {}};

  auto scored = score_candidates(candidates);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    if (scored[i].score > scored[best].score ||
        (scored[i].score == scored[best].score &&
         scored[i].triple.weight > scored[best].triple.weight)) {
      best = i;
    }
  }
  return SelectionResult{scored[best], SelectionBranch::ScoredFallback, std::move(scored)};
}

}  // namespace kgctx
