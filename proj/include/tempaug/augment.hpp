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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tempaug/graph.hpp"

namespace tempaug {

enum class Realization { Full, SelfEvolution, Disentangled };

std::string to_string(Realization r);
Realization parse_realization(const std::string& text);

enum class BlockTag { Diagonal, Cross };

struct AugmentedEdge {
  std::size_t src;
  std::size_t dst;
  BlockTag tag;

  auto operator<=>(const AugmentedEdge&) const = default;
};

/// One directed propagation graph over T*N node-times, described by which
/// block patterns it contains. Blocks reference the per-snapshot CSRs; no
/// TN x TN structure is ever formed.
class AugmentedGraph {
 public:
  struct Blocks {
    bool snapshot_diagonal = false;  // (t,t) = A~^t
    bool identity_diagonal = false;  // (t,t) = I
    bool identity_next = false;      // (t,t+1) = I
    bool snapshot_cross = false;     // (i,j), i<j, = A^j
  };

  AugmentedGraph(std::shared_ptr<const std::vector<Snapshot>> snapshots, std::size_t n_nodes, Blocks blocks);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_steps() const { return snapshots_->size(); }
  std::size_t n_node_times() const { return n_nodes_ * n_steps(); }
  const Blocks& blocks() const { return blocks_; }

  /// Calls fn(src, tag) for every in-edge of node-time `dst`, sources ascending.
  template <typename Fn>
  void for_each_in_edge(std::size_t dst, Fn&& fn) const;

  std::size_t in_degree(std::size_t dst) const;
  std::size_t n_edges() const;

  /// Incoming-edge CSR: row = destination node-time, columns = sources.
  SparseCsr incoming() const;
  /// All directed edges ordered by (src, dst).
  std::vector<AugmentedEdge> edges() const;

 private:
  std::shared_ptr<const std::vector<Snapshot>> snapshots_;
  std::size_t n_nodes_;
  Blocks blocks_;
};

/// Time-augmented graph under one realization. Full and SelfEvolution hold a
/// single joint graph; Disentangled holds a structural and a temporal part.
struct TimeAugmentedGraph {
  Realization realization = Realization::SelfEvolution;
  std::size_t n_nodes = 0;
  std::size_t n_steps = 0;
  std::vector<AugmentedGraph> parts;

  const AugmentedGraph& joint() const;
  const AugmentedGraph& structural() const;
  const AugmentedGraph& temporal() const;

  std::size_t n_edges() const;
};

TimeAugmentedGraph build_augmented(const SnapshotSequence& seq, Realization realization);

/// Diagonal blocks only: the static per-snapshot graph with self-loops.
AugmentedGraph build_static(const SnapshotSequence& seq);

/// Exact edge count predicted from snapshot sizes.
std::size_t expected_edge_count(const SnapshotSequence& seq, Realization realization);

template <typename Fn>
void AugmentedGraph::for_each_in_edge(std::size_t dst, Fn&& fn) const {
  const std::size_t n = n_nodes_;
  const std::size_t t = dst / n;
  const std::size_t v = dst % n;
  // Sources at earlier times come first since idx = t*n + v.
  if (blocks_.snapshot_cross) {
    const auto neighbors = (*snapshots_)[t].adjacency.row(v);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t u : neighbors) fn(i * n + u, BlockTag::Cross);
  }
  if (blocks_.identity_next && t > 0) fn((t - 1) * n + v, BlockTag::Cross);
  if (blocks_.snapshot_diagonal) {
    for (std::size_t u : (*snapshots_)[t].adjacency_with_loops.row(v)) fn(t * n + u, BlockTag::Diagonal);
  } else if (blocks_.identity_diagonal) {
    fn(dst, BlockTag::Diagonal);
  }
}

}  // namespace tempaug
