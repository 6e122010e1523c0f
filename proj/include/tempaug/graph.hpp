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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tempaug/common.hpp"

namespace tempaug {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

/// Compressed sparse row matrix. `values` empty means a binary matrix.
struct SparseCsr {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return col_indices.size(); }
  std::span<const std::size_t> row(std::size_t r) const {
    return {col_indices.data() + row_offsets[r], row_offsets[r + 1] - row_offsets[r]};
  }
  bool contains(std::size_t r, std::size_t c) const;

  /// Throws ValidationError when offsets, bounds or per-row ordering are broken.
  void validate() const;

  /// Builds a binary matrix from (row, col) pairs. Duplicates are collapsed.
  static SparseCsr from_pairs(std::size_t n_rows, std::size_t n_cols,
                              std::vector<std::pair<std::size_t, std::size_t>> pairs);
};

/// One undirected snapshot: adjacency without loops plus the self-looped copy.
struct Snapshot {
  SparseCsr adjacency;
  SparseCsr adjacency_with_loops;

  /// Number of undirected edges.
  std::size_t n_edges() const { return adjacency.nnz() / 2; }

  /// Self-loop edges (u,u) in the input are dropped.
  static Snapshot from_undirected(std::size_t n_nodes, std::span<const Edge> edges);
};

enum class FeatureMode { OneHotNodeId, Explicit };

/// Node-time feature rows. Row index is t * n_nodes + v.
struct FeatureMatrix {
  FeatureMode mode = FeatureMode::OneHotNodeId;
  std::size_t n_nodes = 0;
  std::size_t n_steps = 0;
  std::size_t dim = 0;
  Matrix rows;  // only populated in Explicit mode, (n_steps*n_nodes) x dim

  static FeatureMatrix one_hot(std::size_t n_nodes, std::size_t n_steps);
  static FeatureMatrix explicit_rows(std::size_t n_nodes, std::size_t n_steps, Matrix rows);

  /// Materializes the feature row of a node-time (dense, length dim).
  Eigen::VectorXd row(std::size_t node_time) const;
};

/// y[v][t] stored time-major; kMissing marks unlabeled node-times.
struct LabelTensor {
  static constexpr int kMissing = -1;

  std::size_t n_nodes = 0;
  std::size_t n_steps = 0;
  std::vector<int> y;

  LabelTensor() = default;
  LabelTensor(std::size_t n_nodes, std::size_t n_steps)
      : n_nodes(n_nodes), n_steps(n_steps), y(n_nodes * n_steps, kMissing) {}

  int at(NodeId v, std::size_t t) const { return y[t * n_nodes + v]; }
  int& at(NodeId v, std::size_t t) { return y[t * n_nodes + v]; }
};

inline std::size_t node_time(std::size_t n_nodes, NodeId v, std::size_t t) { return t * n_nodes + v; }

struct SnapshotSequence {
  std::size_t n_nodes = 0;
  std::size_t n_steps = 0;
  std::size_t n_classes = 0;
  std::vector<Snapshot> snapshots;
  FeatureMatrix features;
  LabelTensor labels;
  /// Original node identifiers, indexed by dense id. Empty for synthetic data.
  std::vector<std::string> node_ids;

  void validate() const;
};

/// Builds a sequence from per-step undirected edge lists with one-hot features.
SnapshotSequence make_sequence(std::size_t n_nodes, const std::vector<std::vector<Edge>>& edges_per_step,
                               LabelTensor labels, std::size_t n_classes);

struct SplitSpec {
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::size_t n_test = 0;

  std::size_t total() const { return n_train + n_val + n_test; }
  /// Parses "a,b,c".
  static SplitSpec parse(const std::string& text);
};

/// Labeled node-time indices per partition, sorted ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Slices a timestamped edge stream into `n_steps` equal-width intervals
/// (half-open, last one closed). Throws ValidationError on malformed rows.
SnapshotSequence load_edge_stream(const std::filesystem::path& edges_path,
                                  const std::filesystem::path& labels_path, std::size_t n_steps,
                                  Warnings* warnings = nullptr);

/// Writes `original_id<TAB>dense_id` rows.
void write_node_map(const SnapshotSequence& seq, const std::filesystem::path& path);

Split build_split(const SnapshotSequence& seq, const SplitSpec& spec);

struct DsbmParams {
  std::size_t n_nodes = 100;
  std::size_t n_steps = 8;
  std::size_t n_blocks = 4;
  double p_in = 0.2;
  double p_out = 0.02;
  double drift = 0.1;
  std::uint64_t seed = 7;
};

/// Dynamic stochastic block model; labels are the current block.
SnapshotSequence synth_dsbm(const DsbmParams& params);

/// Writes a sequence back out as an edge stream (timestamp = step index) and label file.
void write_edge_stream(const SnapshotSequence& seq, const std::filesystem::path& edges_path,
                       const std::filesystem::path& labels_path);

}  // namespace tempaug
