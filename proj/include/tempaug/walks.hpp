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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempaug/augment.hpp"

namespace tempaug {

/// One hop (from, to) taken in snapshot `time` (zero-based).
struct WalkStep {
  NodeId from;
  NodeId to;
  std::size_t time;

  auto operator<=>(const WalkStep&) const = default;
};

/// Steps carry non-decreasing times and each hop is an edge of its snapshot.
using TemporalWalk = std::vector<WalkStep>;

std::string format_walk(const TemporalWalk& walk);

inline constexpr std::size_t kDefaultWalkBudget = 1'000'000;

/// Every temporal walk from `source` with 1..max_len steps.
/// Throws BudgetExceeded past `budget` walks.
std::vector<TemporalWalk> enumerate_temporal_walks(const SnapshotSequence& seq, NodeId source,
                                                   std::size_t max_len,
                                                   std::size_t budget = kDefaultWalkBudget);

struct CorrespondenceReport {
  bool injective_map_ok = false;
  bool reachability_ok = false;
  std::optional<std::string> counterexample;
  std::size_t n_temporal_walks = 0;
  std::size_t n_augmented_walks = 0;

  bool ok() const { return injective_map_ok && reachability_ok; }
};

/// Brute-force check that walks on the augmented graph simulate temporal walks.
///
/// Full: each temporal walk maps to a distinct augmented walk, and every
/// augmented walk without self-loop edges projects back to a temporal walk.
/// SelfEvolution (and Disentangled, checked on the union of its parts): the
/// same map with self-evolution hops inserted, plus reachability equivalence.
/// Reachability is checked for every realization against a temporal oracle.
CorrespondenceReport verify_correspondence(const SnapshotSequence& seq, Realization realization,
                                           std::size_t max_len, std::size_t budget = kDefaultWalkBudget);

/// Same checks against an explicit edge list, e.g. a mutated construction.
CorrespondenceReport verify_edges(const SnapshotSequence& seq, Realization realization,
                                  std::span<const AugmentedEdge> edges, std::size_t max_len,
                                  std::size_t budget = kDefaultWalkBudget);

}  // namespace tempaug
