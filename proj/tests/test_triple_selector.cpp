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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgctx/triple_selector.hpp"
#include "test_util.hpp"

namespace kgctx {
namespace {

Triple make_triple(const std::string& s, RelationType r, const std::string& o, double w) {
  return Triple{normalize_concept(s), r, normalize_concept(o), w};
}

// ---------------------------------------------------------------------------
// Independent brute-force re-implementation used as the oracle. Kept free of
// any KnowledgeGraph indexing or score_candidates code on purpose.
// ---------------------------------------------------------------------------

struct BruteResult {
  std::optional<Triple> chosen;
  bool direct = false;
};

BruteResult brute_force_select(const std::vector<Triple>& all, const ConceptId& e_q,
                               const ConceptId& e_c) {
  BruteResult result;
  for (const Triple& t : all) {
    if (t.subject == e_q && t.object == e_c) {
      if (!result.chosen || t.weight > result.chosen->weight) result.chosen = t;
      result.direct = true;
    }
  }
  if (result.direct) return result;

  std::vector<Triple> cands;
  for (const Triple& t : all)
    if (t.subject == e_c || t.object == e_c) cands.push_back(t);
  if (cands.empty()) return result;

  std::map<std::string, std::size_t> rel_counts;
  for (const Triple& t : cands) rel_counts[std::string(to_string(t.relation))]++;
  const double n = static_cast<double>(cands.size());

  std::optional<Triple> best;
  double best_score = 0.0;
  for (const Triple& t : cands) {
    const double score =
        t.weight * (n / static_cast<double>(rel_counts[std::string(to_string(t.relation))]));
    const bool better = !best || score > best_score ||
                        (score == best_score && t.weight > best->weight);
    if (better) {
      best = t;
      best_score = score;
    }
  }
  result.chosen = best;
  return result;
}

// Random graph with unique (s, r, o) keys so the oracle need not model
// duplicate merging.
std::vector<Triple> random_triples(TestRng& rng, std::size_t max_triples,
                                   std::size_t max_relations,
                                   const std::vector<std::string>& pool) {
  std::vector<Triple> out;
  std::map<std::string, bool> seen;
  const auto target = 1 + rng.below(max_triples);
  for (std::uint64_t i = 0; i < target * 3 && out.size() < target; ++i) {
    const auto& s = pool[rng.below(pool.size())];
    const auto& o = pool[rng.below(pool.size())];
    const auto r = static_cast<RelationType>(rng.below(max_relations));
    std::string key = s + "|" + std::string(to_string(r)) + "|" + o;
    if (seen[key]) continue;
    seen[key] = true;
    // Coarse weights make score ties reachable.
    const double w = static_cast<double>(rng.below(40)) * 0.25;
    out.push_back(make_triple(s, r, o, w));
  }
  return out;
}

KnowledgeGraph graph_of(const std::vector<Triple>& triples) {
  KnowledgeGraph g;
  for (const Triple& t : triples) g.add_triple(t);
  return g;
}

// ---------------------------------------------------------------------------

TEST(ScoreCandidates, SingleTripleScoresItsOwnWeight) {
  std::vector<Triple> cands = {make_triple("a", RelationType::Causes, "b", 0.7)};
  auto scored = score_candidates(cands);
  ASSERT_EQ(scored.size(), 1u);
  EXPECT_EQ(scored[0].n_total, 1u);
  EXPECT_EQ(scored[0].n_relation, 1u);
  EXPECT_DOUBLE_EQ(scored[0].type_weight, 1.0);
  EXPECT_DOUBLE_EQ(scored[0].score, 0.7);
}

TEST(ScoreCandidates, RarerRelationScoresHigher) {
  // Four candidates, all weight 1: three AtLocation, one Causes.
  std::vector<Triple> cands = {
      make_triple("egg", RelationType::AtLocation, "nest", 1.0),
      make_triple("egg", RelationType::AtLocation, "fridge", 1.0),
      make_triple("egg", RelationType::AtLocation, "farm", 1.0),
      make_triple("chicken", RelationType::Causes, "egg", 1.0),
  };
  auto scored = score_candidates(cands);
  ASSERT_EQ(scored.size(), 4u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(scored[i].n_relation, 3u);
    EXPECT_DOUBLE_EQ(scored[i].type_weight, 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(scored[i].score, 4.0 / 3.0);
  }
  EXPECT_EQ(scored[3].n_relation, 1u);
  EXPECT_DOUBLE_EQ(scored[3].score, 4.0);
}

TEST(ScoreCandidates, UniformRelationCancelsTypeWeight) {
  std::vector<Triple> cands = {
      make_triple("a", RelationType::PartOf, "b", 2.0),
      make_triple("c", RelationType::PartOf, "d", 0.5),
  };
  auto scored = score_candidates(cands);
  EXPECT_DOUBLE_EQ(scored[0].type_weight, 1.0);
  EXPECT_DOUBLE_EQ(scored[0].score, 2.0);
  EXPECT_DOUBLE_EQ(scored[1].score, 0.5);
}

TEST(ScoreCandidates, EmptyListThrows) {
  std::vector<Triple> none;
  EXPECT_THROW(score_candidates(none), EmptyCandidates);
}

TEST(ScoreCandidates, PreservesInputOrder) {
  std::vector<Triple> cands = {
      make_triple("x", RelationType::Desires, "y", 3.0),
      make_triple("y", RelationType::Causes, "z", 1.0),
  };
  auto scored = score_candidates(cands);
  EXPECT_EQ(scored[0].triple, cands[0]);
  EXPECT_EQ(scored[1].triple, cands[1]);
}

TEST(SelectTriple, DirectEdgeWins) {
  auto g = graph_of({make_triple("bat", RelationType::CapableOf, "fly", 1.0)});
  auto sel = select_triple(g, normalize_concept("bat"), normalize_concept("fly"));
  EXPECT_EQ(sel.branch, SelectionBranch::DirectEdge);
  ASSERT_TRUE(sel.chosen.has_value());
  EXPECT_EQ(sel.chosen->triple.relation, RelationType::CapableOf);
  EXPECT_TRUE(sel.candidates.empty());
}

TEST(SelectTriple, ParallelDirectEdgesResolveToHighestWeight) {
  auto g = graph_of({
      make_triple("bat", RelationType::CapableOf, "fly", 1.0),
      make_triple("bat", RelationType::Desires, "fly", 2.5),
  });
  auto sel = select_triple(g, normalize_concept("bat"), normalize_concept("fly"));
  EXPECT_EQ(sel.branch, SelectionBranch::DirectEdge);
  EXPECT_EQ(sel.chosen->triple.relation, RelationType::Desires);
}

TEST(SelectTriple, ReverseEdgeIsNotDirect) {
  auto g = graph_of({make_triple("fly", RelationType::CapableOf, "bat", 1.0)});
  auto sel = select_triple(g, normalize_concept("bat"), normalize_concept("fly"));
  // e_c = fly appears as subject, so the fallback still finds it.
  EXPECT_EQ(sel.branch, SelectionBranch::ScoredFallback);
}

TEST(SelectTriple, FallbackPicksHighestScore) {
  // The four-candidate set: the rare Causes relation scores 4.0 and wins.
  auto g = graph_of({
      make_triple("egg", RelationType::AtLocation, "nest", 1.0),
      make_triple("egg", RelationType::AtLocation, "fridge", 1.0),
      make_triple("egg", RelationType::AtLocation, "farm", 1.0),
      make_triple("chicken", RelationType::Causes, "egg", 1.0),
  });
  auto sel = select_triple(g, normalize_concept("breakfast"), normalize_concept("egg"));
  EXPECT_EQ(sel.branch, SelectionBranch::ScoredFallback);
  ASSERT_TRUE(sel.chosen.has_value());
  EXPECT_EQ(sel.chosen->triple.relation, RelationType::Causes);
  EXPECT_DOUBLE_EQ(sel.chosen->score, 4.0);
  EXPECT_EQ(sel.candidates.size(), 4u);
}

TEST(SelectTriple, UnknownChoiceEntityYieldsNoTriple) {
  auto g = graph_of({make_triple("a", RelationType::Causes, "b", 1.0)});
  auto sel = select_triple(g, normalize_concept("a"), normalize_concept("unknown"));
  EXPECT_EQ(sel.branch, SelectionBranch::NoTriple);
  EXPECT_FALSE(sel.chosen.has_value());
}

TEST(SelectTriple, ScoreTieBreaksOnWeightThenOrder) {
  // Two relations, both rare (count 1 each of 2): type weight 2 for both.
  // Weights 1.0 vs 2.0: score 2.0 vs 4.0. Make them tie instead by weight:
  auto g = graph_of({
      make_triple("x", RelationType::Causes, "e", 2.0),
      make_triple("e", RelationType::Antonym, "y", 2.0),
  });
  auto sel = select_triple(g, normalize_concept("q"), normalize_concept("e"));
  // Equal score and weight: earliest ingestion order wins.
  EXPECT_EQ(sel.chosen->triple.relation, RelationType::Causes);

  auto g2 = graph_of({
      make_triple("x", RelationType::Causes, "e", 1.0),
      make_triple("e", RelationType::Antonym, "y", 2.0),
  });
  auto sel2 = select_triple(g2, normalize_concept("q"), normalize_concept("e"));
  // Scores 2.0 vs 4.0 now: Antonym wins outright.
  EXPECT_EQ(sel2.chosen->triple.relation, RelationType::Antonym);
}

// Rarity property: with uniform weights, a strictly rarest relation always
// wins the fallback.
TEST(SelectTriple, RarestRelationWinsUnderUniformWeights) {
  TestRng rng(23);
  for (int iter = 0; iter < 300; ++iter) {
    // Candidate multiset: relation r0 appears once, r1 appears 2..5 times,
    // r2 appears as often as r1 or more.
    const auto n1 = 2 + rng.below(4);
    const auto n2 = n1 + rng.below(3);
    std::vector<Triple> triples;
    triples.push_back(make_triple("filler0", RelationType::CausesDesire, "e", 1.0));
    for (std::uint64_t i = 0; i < n1; ++i)
      triples.push_back(make_triple("a" + std::to_string(i), RelationType::PartOf, "e", 1.0));
    for (std::uint64_t i = 0; i < n2; ++i)
      triples.push_back(make_triple("b" + std::to_string(i), RelationType::AtLocation, "e", 1.0));
    // Shuffle by random rotation to vary ingestion order.
    const auto rot = rng.below(triples.size());
    std::rotate(triples.begin(), triples.begin() + rot, triples.end());

    auto sel = select_triple(graph_of(triples), normalize_concept("q"), normalize_concept("e"));
    ASSERT_EQ(sel.branch, SelectionBranch::ScoredFallback);
    EXPECT_EQ(sel.chosen->triple.relation, RelationType::CausesDesire)
        << "iteration " << iter;
  }
}

// Scaling every weight by k > 0 scales every score by k and leaves the
// argmax unchanged.
TEST(SelectTriple, ArgmaxInvariantUnderWeightScaling) {
  TestRng rng(31);
  const std::vector<std::string> pool = {"e", "a", "b", "c", "d", "f"};
  for (int iter = 0; iter < 100; ++iter) {
    auto triples = random_triples(rng, 20, kRelationCount, pool);
    const auto e_c = normalize_concept("e");
    auto base = select_triple(graph_of(triples), normalize_concept("zz"), e_c);
    for (double k : {0.5, 2.0, 16.0}) {
      auto scaled = triples;
      for (Triple& t : scaled) t.weight *= k;
      auto sel = select_triple(graph_of(scaled), normalize_concept("zz"), e_c);
      EXPECT_EQ(sel.branch, base.branch);
      if (base.chosen) {
        ASSERT_TRUE(sel.chosen.has_value());
        EXPECT_EQ(sel.chosen->triple.subject, base.chosen->triple.subject);
        EXPECT_EQ(sel.chosen->triple.relation, base.chosen->triple.relation);
        EXPECT_EQ(sel.chosen->triple.object, base.chosen->triple.object);
      }
    }
  }
}

TEST(SelectTriple, DeterministicAcrossRuns) {
  auto g = ingest_dump_file(fixture_path("conceptnet_raw.tsv")).graph;
  auto a = select_triple(g, normalize_concept("bat"), normalize_concept("egg"));
  auto b = select_triple(g, normalize_concept("bat"), normalize_concept("egg"));
  EXPECT_EQ(a.branch, b.branch);
  ASSERT_TRUE(a.chosen.has_value());
  EXPECT_EQ(a.chosen->triple, b.chosen->triple);
  EXPECT_EQ(a.chosen->score, b.chosen->score);
}

// Oracle equivalence on random graphs: the indexed, incremental selector
// must agree with the brute-force scorer everywhere.
TEST(SelectTriple, MatchesBruteForceOnRandomGraphs) {
  TestRng rng(47);
  const std::vector<std::string> pool = {"e", "q", "a", "b", "c", "d", "f", "g", "h"};
  for (int iter = 0; iter < 300; ++iter) {
    auto triples = random_triples(rng, 50, kRelationCount, pool);
    const auto e_q = normalize_concept(pool[rng.below(pool.size())]);
    const auto e_c = normalize_concept(pool[rng.below(pool.size())]);

    auto expected = brute_force_select(triples, e_q, e_c);
    auto actual = select_triple(graph_of(triples), e_q, e_c);

    ASSERT_EQ(actual.chosen.has_value(), expected.chosen.has_value()) << "iteration " << iter;
    if (expected.chosen) {
      EXPECT_EQ(actual.chosen->triple, *expected.chosen) << "iteration " << iter;
      EXPECT_EQ(actual.branch == SelectionBranch::DirectEdge, expected.direct);
    } else {
      EXPECT_EQ(actual.branch, SelectionBranch::NoTriple);
    }
  }
}

}  // namespace
}  // namespace kgctx
