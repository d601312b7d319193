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

#include <chrono>
#include <map>
#include <sstream>

#include "kgctx/kg_store.hpp"
#include "test_util.hpp"

namespace kgctx {
namespace {

Triple make_triple(const std::string& s, RelationType r, const std::string& o, double w) {
  return Triple{normalize_concept(s), r, normalize_concept(o), w};
}

TEST(IngestDump, KeepsSingleWhitelistedEnglishRecord) {
  std::istringstream in(
      "/a/[x]\t/r/AtLocation\t/c/en/apple\t/c/en/tree\t{\"weight\": 2.0}\n");
  auto result = ingest_dump(in);
  EXPECT_EQ(result.report.read, 1u);
  EXPECT_EQ(result.report.kept, 1u);
  ASSERT_EQ(result.graph.size(), 1u);
  EXPECT_EQ(result.graph.triples()[0].subject.str(), "apple");
  EXPECT_EQ(result.graph.triples()[0].relation, RelationType::AtLocation);
  EXPECT_EQ(result.graph.triples()[0].object.str(), "tree");
  EXPECT_DOUBLE_EQ(result.graph.triples()[0].weight, 2.0);
}

TEST(IngestDump, DropsNonWhitelistedRelation) {
  std::istringstream in("/a/[x]\t/r/RelatedTo\t/c/en/apple\t/c/en/fruit\t{\"weight\": 1.0}\n");
  auto result = ingest_dump(in);
  EXPECT_EQ(result.report.kept, 0u);
  EXPECT_EQ(result.report.dropped_by_relation, 1u);
  EXPECT_TRUE(result.report.empty_graph);
}

// Hand classification of the 12-line fixture:
//   kept: lines 1, 3, 5, 7, 10, 12 (12 duplicates 1 and merges)
//   dropped_by_relation: lines 2 (RelatedTo), 11 (IsA)
//   dropped_by_language: lines 4 (fr subject), 8 (ja object)
//   malformed: lines 6 (field count), 9 (metadata not JSON)
TEST(IngestDump, FixtureCountsMatchHandCount) {
  auto result = ingest_dump_file(fixture_path("conceptnet_raw.tsv"));
  const auto& r = result.report;
  EXPECT_EQ(r.read, 12u);
  EXPECT_EQ(r.kept, 6u);
  EXPECT_EQ(r.dropped_by_relation, 2u);
  EXPECT_EQ(r.dropped_by_language, 2u);
  EXPECT_EQ(r.malformed, 2u);
  EXPECT_EQ(r.merged_duplicates, 1u);
  EXPECT_FALSE(r.empty_graph);
  EXPECT_EQ(r.read, r.kept + r.dropped_by_relation + r.dropped_by_language + r.malformed);

  // Unique triples after merging, ingestion order.
  ASSERT_EQ(result.graph.size(), 5u);
  EXPECT_EQ(result.graph.triples()[0].subject.str(), "apple");
  // Duplicate (s, r, o) keeps the max weight seen.
  EXPECT_DOUBLE_EQ(result.graph.triples()[0].weight, 5.0);
  EXPECT_EQ(result.graph.triples()[1].subject.str(), "bat");
  EXPECT_EQ(result.graph.triples()[4].relation, RelationType::Antonym);
}

TEST(IngestDump, FixtureEggLookupMatchesHandEnumeration) {
  auto result = ingest_dump_file(fixture_path("conceptnet_raw.tsv"));
  auto triples = result.graph.triples_containing(normalize_concept("egg"));
  ASSERT_EQ(triples.size(), 2u);
  EXPECT_EQ(triples[0].subject.str(), "chicken");  // egg as object, line 5
  EXPECT_EQ(triples[0].relation, RelationType::Causes);
  EXPECT_EQ(triples[1].subject.str(), "egg");  // egg as subject, line 7
  EXPECT_EQ(triples[1].relation, RelationType::HasProperty);
}

TEST(IngestDump, AcceptsCompactFixtureRows) {
  auto result = ingest_dump_file(fixture_path("conceptnet_compact.tsv"));
  EXPECT_EQ(result.report.read, 5u);
  EXPECT_EQ(result.report.kept, 5u);
  ASSERT_EQ(result.graph.size(), 5u);
  EXPECT_EQ(result.graph.triples()[0].object.str(), "eat_gar");
  EXPECT_DOUBLE_EQ(result.graph.triples()[0].weight, 2.5);
}

TEST(IngestDump, CountsBadWeightsAsMalformed) {
  std::istringstream in(
      "a\tAtLocation\tb\tnot_a_number\n"
      "a\tAtLocation\tb\t-1.0\n"
      "a\tAtLocation\tb\tnan\n"
      "a\tAtLocation\tb\tinf\n"
      "/a/[x]\t/r/Causes\t/c/en/a\t/c/en/b\t{\"score\": 1.0}\n");
  auto result = ingest_dump(in);
  EXPECT_EQ(result.report.malformed, 5u);
  EXPECT_EQ(result.report.kept, 0u);
}

TEST(IngestDump, NonAssertionShapedLinesAreMalformedNotDropped) {
  // Five tab-separated fields that are not an assertion row at all.
  std::istringstream in("w1\tw2\tw3\tw4\tw5\n");
  auto result = ingest_dump(in);
  EXPECT_EQ(result.report.malformed, 1u);
  EXPECT_EQ(result.report.dropped_by_language, 0u);
  EXPECT_EQ(result.report.dropped_by_relation, 0u);
}

// Count arithmetic holds no matter what the stream contains: every read line
// lands in exactly one bucket.
TEST(IngestDump, CountsPartitionReadLinesOnRandomSoup) {
  TestRng rng(211);
  const std::vector<std::string> pieces = {
      "/a/[x]", "/r/AtLocation", "/r/RelatedTo", "/c/en/apple", "/c/fr/pomme", "tree",
      "{\"weight\": 1.5}", "{\"weight\": -2}", "not json", "", "2.0", "x",
  };
  for (int iter = 0; iter < 100; ++iter) {
    std::string soup;
    const auto lines = 1 + rng.below(20);
    for (std::uint64_t l = 0; l < lines; ++l) {
      const auto fields = 1 + rng.below(6);
      for (std::uint64_t f = 0; f < fields; ++f) {
        if (f) soup += '\t';
        soup += pieces[rng.below(pieces.size())];
      }
      soup += '\n';
    }
    std::istringstream in(soup);
    auto result = ingest_dump(in);
    const auto& r = result.report;
    EXPECT_EQ(r.read, r.kept + r.dropped_by_relation + r.dropped_by_language + r.malformed)
        << soup;
    EXPECT_LE(r.merged_duplicates, r.kept);
    EXPECT_EQ(result.graph.size(), r.kept - r.merged_duplicates);
  }
}

TEST(IngestDump, RelationFilterSubsetsTheWhitelist) {
  IngestOptions options;
  options.relation_filter = {{RelationType::Causes}};
  auto result = ingest_dump_file(fixture_path("conceptnet_raw.tsv"), options);
  EXPECT_EQ(result.report.kept, 1u);
  ASSERT_EQ(result.graph.size(), 1u);
  EXPECT_EQ(result.graph.triples()[0].relation, RelationType::Causes);
}

TEST(IngestDump, MissingFileThrowsIoError) {
  EXPECT_THROW(ingest_dump_file("/nonexistent/dump.tsv"), IoError);
}

#if defined(KGCTX_HAS_ZLIB)
TEST(IngestDump, ReadsGzipCompressedDump) {
  auto plain = ingest_dump_file(fixture_path("conceptnet_raw.tsv"));
  auto gz = ingest_dump_file(fixture_path("conceptnet_raw.tsv.gz"));
  EXPECT_EQ(gz.report.read, plain.report.read);
  EXPECT_EQ(gz.report.kept, plain.report.kept);
  ASSERT_EQ(gz.graph.size(), plain.graph.size());
  for (std::size_t i = 0; i < gz.graph.size(); ++i)
    EXPECT_EQ(gz.graph.triples()[i], plain.graph.triples()[i]);
}
#endif

TEST(KnowledgeGraph, UnknownConceptYieldsEmptyList) {
  auto result = ingest_dump_file(fixture_path("conceptnet_raw.tsv"));
  EXPECT_TRUE(result.graph.triples_containing(normalize_concept("unicorn")).empty());
}

TEST(KnowledgeGraph, FindsSubjectAndObjectRoles) {
  KnowledgeGraph g;
  g.add_triple(make_triple("a", RelationType::Causes, "b", 1.0));
  g.add_triple(make_triple("b", RelationType::PartOf, "c", 1.0));
  auto triples = g.triples_containing(normalize_concept("b"));
  ASSERT_EQ(triples.size(), 2u);
  EXPECT_EQ(triples[0].subject.str(), "a");
  EXPECT_EQ(triples[1].subject.str(), "b");
}

TEST(KnowledgeGraph, SelfLoopReportedOnce) {
  KnowledgeGraph g;
  g.add_triple(make_triple("a", RelationType::Antonym, "a", 1.0));
  EXPECT_EQ(g.triples_containing(normalize_concept("a")).size(), 1u);
}

TEST(KnowledgeGraph, PairLookupReturnsExactMatches) {
  auto g = ingest_dump_file(fixture_path("conceptnet_raw.tsv")).graph;
  const auto* hits = g.find_by_pair(normalize_concept("apple"), normalize_concept("tree"));
  ASSERT_NE(hits, nullptr);
  ASSERT_EQ(hits->size(), 1u);
  EXPECT_EQ(g.find_by_pair(normalize_concept("tree"), normalize_concept("apple")), nullptr);
}

// Index/oracle equivalence: the indexed lookup must agree with a plain
// linear scan on random graphs.
TEST(KnowledgeGraph, ContainingLookupMatchesLinearScan) {
  TestRng rng(11);
  const std::vector<std::string> pool = {"c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7"};
  for (int iter = 0; iter < 200; ++iter) {
    KnowledgeGraph g;
    std::vector<Triple> reference;  // with duplicates merged, as the graph stores them
    const auto n = 1 + rng.below(30);
    for (std::uint64_t i = 0; i < n; ++i) {
      auto t = make_triple(pool[rng.below(pool.size())],
                           static_cast<RelationType>(rng.below(kRelationCount)),
                           pool[rng.below(pool.size())], rng.real() * 5.0);
      bool inserted = g.add_triple(t);
      if (inserted) {
        reference.push_back(t);
      } else {
        for (auto& prev : reference) {
          if (prev.subject == t.subject && prev.relation == t.relation &&
              prev.object == t.object) {
            prev.weight = std::max(prev.weight, t.weight);
            break;
          }
        }
      }
    }
    const auto e = normalize_concept(pool[rng.below(pool.size())]);
    std::vector<Triple> scan;
    for (const Triple& t : reference)
      if (t.subject == e || t.object == e) scan.push_back(t);
    auto indexed = g.triples_containing(e);
    ASSERT_EQ(indexed.size(), scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) EXPECT_EQ(indexed[i], scan[i]);
  }
}

TEST(KnowledgeGraph, VocabularyListsEveryNodeOnce) {
  auto g = ingest_dump_file(fixture_path("conceptnet_raw.tsv")).graph;
  auto vocab = g.vocabulary();
  // 5 unique triples over nodes: apple tree bat fly chicken egg fragile hot cold
  EXPECT_EQ(vocab.size(), 9u);
  EXPECT_EQ(vocab[0].str(), "apple");
}

// Scale smoke test: 100k raw lines collapse to their unique (s, r, o) keys
// with max-weight merging, checked against a map built alongside the
// generator. Also guards ingest throughput staying in a sane range.
TEST(IngestDump, HundredThousandLineDumpMergesCorrectly) {
  std::ostringstream dump;
  std::map<std::string, double> expected;
  for (int i = 0; i < 100000; ++i) {
    const std::string subject = "node" + std::to_string(i % 5000);
    const std::string object = "node" + std::to_string((i * 7 + 1) % 5000);
    const std::string relation(kRelationNames[i % 10]);
    const double weight = 1.0 + (i % 9) * 0.5;
    dump << "/a/[x]\t/r/" << relation << "\t/c/en/" << subject << "\t/c/en/" << object
         << "\t{\"weight\": " << weight << "}\n";
    auto [it, inserted] = expected.try_emplace(subject + "|" + relation + "|" + object, weight);
    if (!inserted) it->second = std::max(it->second, weight);
  }

  const auto start = std::chrono::steady_clock::now();
  std::istringstream in(dump.str());
  auto result = ingest_dump(in);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  EXPECT_EQ(result.report.read, 100000u);
  EXPECT_EQ(result.report.kept, 100000u);
  ASSERT_EQ(result.graph.size(), expected.size());
  for (const Triple& t : result.graph.triples()) {
    auto it = expected.find(t.subject.str() + "|" + std::string(to_string(t.relation)) + "|" +
                            t.object.str());
    ASSERT_NE(it, expected.end());
    EXPECT_DOUBLE_EQ(t.weight, it->second);
  }
  EXPECT_LT(secs, 15.0);  // measured ~0.2s optimized; wide margin for debug builds
}

TEST(KnowledgeGraphIndex, SaveLoadRoundTripsExactly) {
  auto g = ingest_dump_file(fixture_path("conceptnet_raw.tsv")).graph;
  std::ostringstream out;
  g.save(out);
  std::istringstream in(out.str());
  auto loaded = KnowledgeGraph::load(in);
  ASSERT_EQ(loaded.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(loaded.triples()[i], g.triples()[i]);

  // Deterministic bytes on re-save.
  std::ostringstream out2;
  loaded.save(out2);
  EXPECT_EQ(out.str(), out2.str());
}

TEST(KnowledgeGraphIndex, RejectsVersionMismatch) {
  std::istringstream in("kgctx.kg.index 999 0\n");
  EXPECT_THROW(KnowledgeGraph::load(in), IndexFormatError);
}

TEST(KnowledgeGraphIndex, RejectsForeignFile) {
  std::istringstream in("something else entirely\n");
  EXPECT_THROW(KnowledgeGraph::load(in), IndexFormatError);
  std::istringstream empty("");
  EXPECT_THROW(KnowledgeGraph::load(empty), IndexFormatError);
}

TEST(KnowledgeGraphIndex, RejectsCorruptBodyLine) {
  std::istringstream missing_field("kgctx.kg.index 1 1\napple\tAtLocation\ttree\n");
  EXPECT_THROW(KnowledgeGraph::load(missing_field), IndexFormatError);
  std::istringstream bad_relation("kgctx.kg.index 1 1\napple\tNotARelation\ttree\t1.0\n");
  EXPECT_THROW(KnowledgeGraph::load(bad_relation), IndexFormatError);
  std::istringstream bad_weight("kgctx.kg.index 1 1\napple\tAtLocation\ttree\tNaNope\n");
  EXPECT_THROW(KnowledgeGraph::load(bad_weight), IndexFormatError);
}

}  // namespace
}  // namespace kgctx
