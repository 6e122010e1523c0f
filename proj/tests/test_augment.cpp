// Copyright 2026 The tempaug Authors.
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

#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tempaug/augment.hpp"
#include "tempaug/walks.hpp"

using namespace tempaug;
using tempaug::testing::dense_of;
using tempaug::testing::literal_blocks;
using tempaug::testing::sequence_of;

namespace {

// N=3, T=3 hand-built instance used by several cases.
SnapshotSequence three_by_three() { return sequence_of(3, {{{0, 1}}, {{1, 2}}, {{0, 2}, {0, 1}}}); }

// Walk counts by dynamic programming over (node, last time).
std::size_t count_walks_dp(const SnapshotSequence& seq, NodeId source, std::size_t max_len) {
  const std::size_t n = seq.n_nodes, steps = seq.n_steps;
  std::vector<std::vector<double>> ending(n, std::vector<double>(steps, 0.0));
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t v = 0; v < n; ++v) ending[v][t] = seq.snapshots[t].adjacency.contains(source, v) ? 1.0 : 0.0;
  double total = 0.0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<double>> next(n, std::vector<double>(steps, 0.0));
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t t = 0; t < steps; ++t) {
        total += ending[v][t];
        for (std::size_t t2 = t; t2 < steps; ++t2)
          for (std::size_t w = 0; w < n; ++w)
            if (seq.snapshots[t2].adjacency.contains(v, w)) next[w][t2] += ending[v][t];
      }
    ending = std::move(next);
  }
  return static_cast<std::size_t>(total);
}

}  // namespace

TEST_CASE("realization names round-trip") {
  for (auto r : {Realization::Full, Realization::SelfEvolution, Realization::Disentangled})
    CHECK(parse_realization(to_string(r)) == r);
  CHECK(parse_realization("self-evolution") == Realization::SelfEvolution);
  CHECK_THROWS_AS(parse_realization("dense"), ValidationError);
}

TEST_CASE("two-node full construction") {
  const auto seq = sequence_of(2, {{{0, 1}}, {}});
  const auto g = build_augmented(seq, Realization::Full);
  const std::vector<AugmentedEdge> expected{{0, 0, BlockTag::Diagonal},
                                            {0, 1, BlockTag::Diagonal},
                                            {1, 0, BlockTag::Diagonal},
                                            {1, 1, BlockTag::Diagonal},
                                            {2, 2, BlockTag::Diagonal},
                                            {3, 3, BlockTag::Diagonal}};
  CHECK(g.joint().edges() == expected);
}

TEST_CASE("two-node self-evolution adds exactly the identity hops") {
  const auto seq = sequence_of(2, {{{0, 1}}, {}});
  const auto full = build_augmented(seq, Realization::Full).joint().edges();
  auto se = build_augmented(seq, Realization::SelfEvolution).joint().edges();
  std::vector<AugmentedEdge> extra;
  for (const auto& e : se)
    if (std::find(full.begin(), full.end(), e) == full.end()) extra.push_back(e);
  CHECK(extra == std::vector<AugmentedEdge>{{0, 2, BlockTag::Cross}, {1, 3, BlockTag::Cross}});
  CHECK(se.size() == full.size() + 2);
}

TEST_CASE("constructions match the literal block matrices") {
  std::mt19937_64 rng(3);
  std::vector<SnapshotSequence> cases{sequence_of(2, {{{0, 1}}, {}}), three_by_three()};
  for (int k = 0; k < 10; ++k) cases.push_back(tempaug::testing::random_sequence(rng, 4, 3, 0.4));
  for (const auto& seq : cases) {
    CHECK(dense_of(build_augmented(seq, Realization::Full).joint()) == literal_blocks(seq, true, false, false, true));
    CHECK(dense_of(build_augmented(seq, Realization::SelfEvolution).joint()) ==
          literal_blocks(seq, true, false, true, false));
    const auto dis = build_augmented(seq, Realization::Disentangled);
    CHECK(dense_of(dis.structural()) == literal_blocks(seq, true, false, false, false));
    CHECK(dense_of(dis.temporal()) == literal_blocks(seq, false, true, true, false));
    CHECK(dense_of(build_static(seq)) == literal_blocks(seq, true, false, false, false));
  }
}

TEST_CASE("single snapshot collapses to the looped adjacency") {
  const auto seq = sequence_of(3, {{{0, 1}, {1, 2}}});
  const auto expected = literal_blocks(seq, true, false, false, false);
  CHECK(dense_of(build_augmented(seq, Realization::Full).joint()) == expected);
  CHECK(dense_of(build_augmented(seq, Realization::SelfEvolution).joint()) == expected);
  const auto dis = build_augmented(seq, Realization::Disentangled);
  CHECK(dense_of(dis.structural()) == expected);
  CHECK(dense_of(dis.temporal()) == literal_blocks(seq, false, true, false, false));
}

TEST_CASE("edges point forward in time and incoming rows agree with edges") {
  std::mt19937_64 rng(9);
  const auto seq = tempaug::testing::random_sequence(rng, 5, 4, 0.5);
  for (auto r : {Realization::Full, Realization::SelfEvolution, Realization::Disentangled}) {
    const auto g = build_augmented(seq, r);
    CHECK(g.n_edges() == expected_edge_count(seq, r));
    for (const auto& part : g.parts) {
      const auto in = part.incoming();
      CHECK_NOTHROW(in.validate());
      CHECK(in.nnz() == part.n_edges());
      for (const auto& e : part.edges()) {
        CHECK(e.src / 5 <= e.dst / 5);
        CHECK(in.contains(e.dst, e.src));
        CHECK((e.tag == BlockTag::Diagonal) == (e.src / 5 == e.dst / 5));
      }
      for (std::size_t d = 0; d < part.n_node_times(); ++d) CHECK(part.in_degree(d) == in.row(d).size());
    }
  }
}

TEST_CASE("non-disentangled realizations expose a single part") {
  const auto g = build_augmented(three_by_three(), Realization::SelfEvolution);
  CHECK(g.parts.size() == 1);
  CHECK_THROWS(g.structural());
  CHECK(build_augmented(three_by_three(), Realization::Disentangled).parts.size() == 2);
}

TEST_CASE("temporal walk enumeration") {
  SUBCASE("single edge") {
    const auto seq = sequence_of(2, {{{0, 1}}});
    const auto walks = enumerate_temporal_walks(seq, 0, 1);
    REQUIRE(walks.size() == 1);
    CHECK(walks[0] == TemporalWalk{{0, 1, 0}});
  }
  SUBCASE("empty graph") {
    const auto seq = sequence_of(3, {{}, {}});
    CHECK(enumerate_temporal_walks(seq, 0, 4).empty());
  }
  SUBCASE("two-step chain") {
    const auto seq = sequence_of(3, {{{0, 1}}, {{1, 2}}});
    const auto walks = enumerate_temporal_walks(seq, 0, 2);
    CHECK(std::find(walks.begin(), walks.end(), TemporalWalk{{0, 1, 0}, {1, 2, 1}}) != walks.end());
    CHECK(walks.size() == count_walks_dp(seq, 0, 2));
    CHECK(walks.size() == 3);
  }
  SUBCASE("random instances agree with the counting oracle") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 10; ++k) {
      const auto seq = tempaug::testing::random_sequence(rng, 5, 3, 0.4);
      for (NodeId s = 0; s < 5; ++s) CHECK(enumerate_temporal_walks(seq, s, 3).size() == count_walks_dp(seq, s, 3));
    }
  }
  SUBCASE("budget") {
    const auto seq = synth_dsbm({12, 3, 2, 1.0, 0.5, 0.0, 1});
    CHECK_THROWS_AS(enumerate_temporal_walks(seq, 0, 6, 100), BudgetExceeded);
  }
}

TEST_CASE("walk correspondence holds for every realization") {
  std::mt19937_64 rng(5);
  std::vector<SnapshotSequence> cases{three_by_three(), sequence_of(3, {{{0, 1}}, {{1, 2}}}),
                                      sequence_of(3, {{{0, 1}, {1, 2}}})};
  for (int k = 0; k < 8; ++k) cases.push_back(tempaug::testing::random_sequence(rng, 4, 3, 0.4));
  for (const auto& seq : cases) {
    for (auto r : {Realization::Full, Realization::SelfEvolution, Realization::Disentangled}) {
      const auto report = verify_correspondence(seq, r, 3);
      INFO(to_string(r) << " " << report.counterexample.value_or(""));
      CHECK(report.injective_map_ok);
      CHECK(report.reachability_ok);
    }
  }
}

TEST_CASE("a deleted cross edge is reported") {
  const auto seq = sequence_of(3, {{{0, 1}}, {{1, 2}}});
  auto edges = build_augmented(seq, Realization::Full).joint().edges();
  REQUIRE(verify_edges(seq, Realization::Full, edges, 3).ok());
  const auto cross = std::find_if(edges.begin(), edges.end(), [](const auto& e) { return e.tag == BlockTag::Cross; });
  REQUIRE(cross != edges.end());
  edges.erase(cross);
  const auto report = verify_edges(seq, Realization::Full, edges, 3);
  CHECK_FALSE(report.ok());
  CHECK(report.counterexample.has_value());

  auto se = build_augmented(seq, Realization::SelfEvolution).joint().edges();
  se.erase(std::find(se.begin(), se.end(), AugmentedEdge{1, 4, BlockTag::Cross}));
  CHECK_FALSE(verify_edges(seq, Realization::SelfEvolution, se, 3).ok());
}

TEST_CASE("walk formatting") {
  CHECK(format_walk({{0, 1, 0}, {1, 2, 1}}).find("1") != std::string::npos);
}
