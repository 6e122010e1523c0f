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

#include "tempaug/augment.hpp"

#include <algorithm>

namespace tempaug {

std::string to_string(Realization r) {
  switch (r) {
    case Realization::Full: return "full";
    case Realization::SelfEvolution: return "self_evolution";
    case Realization::Disentangled: return "disentangled";
  }
  return "?";
}

Realization parse_realization(const std::string& text) {
  if (text == "full") return Realization::Full;
  if (text == "self_evolution" || text == "self-evolution") return Realization::SelfEvolution;
  if (text == "disentangled") return Realization::Disentangled;
  throw ValidationError("unknown realization '" + text + "' (full|self_evolution|disentangled)");
}

AugmentedGraph::AugmentedGraph(std::shared_ptr<const std::vector<Snapshot>> snapshots, std::size_t n_nodes,
                               Blocks blocks)
    : snapshots_(std::move(snapshots)), n_nodes_(n_nodes), blocks_(blocks) {
  if (blocks_.snapshot_diagonal && blocks_.identity_diagonal)
    throw ValidationError("augmented graph: diagonal blocks are either snapshots or identity");
}

std::size_t AugmentedGraph::in_degree(std::size_t dst) const {
  std::size_t d = 0;
  for_each_in_edge(dst, [&](std::size_t, BlockTag) { ++d; });
  return d;
}

std::size_t AugmentedGraph::n_edges() const {
  const std::size_t n = n_nodes_;
  std::size_t total = 0;
  for (std::size_t t = 0; t < n_steps(); ++t) {
    const auto& s = (*snapshots_)[t];
    if (blocks_.snapshot_diagonal) total += s.adjacency_with_loops.nnz();
    if (blocks_.identity_diagonal) total += n;
    if (blocks_.identity_next && t > 0) total += n;
    if (blocks_.snapshot_cross) total += t * s.adjacency.nnz();
  }
  return total;
}

SparseCsr AugmentedGraph::incoming() const {
  SparseCsr csr;
  csr.n_rows = csr.n_cols = n_node_times();
  csr.row_offsets.assign(csr.n_rows + 1, 0);
  csr.col_indices.reserve(n_edges());
  for (std::size_t dst = 0; dst < csr.n_rows; ++dst) {
    for_each_in_edge(dst, [&](std::size_t src, BlockTag) { csr.col_indices.push_back(src); });
    csr.row_offsets[dst + 1] = csr.col_indices.size();
  }
  return csr;
}

std::vector<AugmentedEdge> AugmentedGraph::edges() const {
  std::vector<AugmentedEdge> out;
  out.reserve(n_edges());
  for (std::size_t dst = 0; dst < n_node_times(); ++dst)
    for_each_in_edge(dst, [&](std::size_t src, BlockTag tag) { out.push_back({src, dst, tag}); });
  std::sort(out.begin(), out.end());
  return out;
}

const AugmentedGraph& TimeAugmentedGraph::joint() const {
  if (realization == Realization::Disentangled) throw std::logic_error("disentangled graph has no joint part");
  return parts.front();
}

const AugmentedGraph& TimeAugmentedGraph::structural() const {
  if (realization != Realization::Disentangled) throw std::logic_error("only disentangled graphs have parts");
  return parts[0];
}

const AugmentedGraph& TimeAugmentedGraph::temporal() const {
  if (realization != Realization::Disentangled) throw std::logic_error("only disentangled graphs have parts");
  return parts[1];
}

std::size_t TimeAugmentedGraph::n_edges() const {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.n_edges();
  return total;
}

TimeAugmentedGraph build_augmented(const SnapshotSequence& seq, Realization realization) {
  seq.validate();
  auto snaps = std::make_shared<const std::vector<Snapshot>>(seq.snapshots);
  TimeAugmentedGraph g;
  g.realization = realization;
  g.n_nodes = seq.n_nodes;
  g.n_steps = seq.n_steps;
  switch (realization) {
    case Realization::Full:
      g.parts.emplace_back(snaps, seq.n_nodes, AugmentedGraph::Blocks{.snapshot_diagonal = true, .snapshot_cross = true});
      break;
    case Realization::SelfEvolution:
      g.parts.emplace_back(snaps, seq.n_nodes, AugmentedGraph::Blocks{.snapshot_diagonal = true, .identity_next = true});
      break;
    case Realization::Disentangled:
      g.parts.emplace_back(snaps, seq.n_nodes, AugmentedGraph::Blocks{.snapshot_diagonal = true});
      g.parts.emplace_back(snaps, seq.n_nodes,
                           AugmentedGraph::Blocks{.identity_diagonal = true, .identity_next = true});
      break;
  }
  return g;
}

AugmentedGraph build_static(const SnapshotSequence& seq) {
  seq.validate();
  auto snaps = std::make_shared<const std::vector<Snapshot>>(seq.snapshots);
  return AugmentedGraph(snaps, seq.n_nodes, AugmentedGraph::Blocks{.snapshot_diagonal = true});
}

std::size_t expected_edge_count(const SnapshotSequence& seq, Realization realization) {
  const std::size_t n = seq.n_nodes;
  const std::size_t steps = seq.n_steps;
  std::size_t diag = 0, cross_full = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t e = seq.snapshots[t].n_edges();
    diag += 2 * e + n;
    cross_full += t * 2 * e;  // blocks (i,t) for every i < t hold A^t
  }
  switch (realization) {
    case Realization::Full: return diag + cross_full;
    case Realization::SelfEvolution: return diag + (steps - 1) * n;
    case Realization::Disentangled: return diag + steps * n + (steps - 1) * n;
  }
  return 0;
}

}  // namespace tempaug
