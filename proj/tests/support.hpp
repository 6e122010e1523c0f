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

// Shared fixtures and brute-force reference implementations for the tests.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tempaug/augment.hpp"
#include "tempaug/graph.hpp"

namespace tempaug::testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* root = std::getenv("TEMPAUG_TEST_TMP");
  std::filesystem::path dir = root != nullptr ? std::filesystem::path(root) : std::filesystem::temp_directory_path();
  dir /= name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Sequence with labels v % 2 at every node-time.
inline SnapshotSequence sequence_of(std::size_t n, const std::vector<std::vector<Edge>>& edges_per_step) {
  LabelTensor labels(n, edges_per_step.size());
  for (std::size_t t = 0; t < edges_per_step.size(); ++t)
    for (std::size_t v = 0; v < n; ++v) labels.at(v, t) = static_cast<int>(v % 2);
  return make_sequence(n, edges_per_step, std::move(labels), 2);
}

inline SnapshotSequence random_sequence(std::mt19937_64& rng, std::size_t n, std::size_t steps, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<Edge>> edges(steps);
  for (auto& step : edges)
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (coin(rng)) step.emplace_back(u, v);
  return sequence_of(n, edges);
}

using DenseAdjacency = std::vector<std::vector<int>>;

/// Block matrix written out literally from the construction rules,
/// entry [src][dst] over time-major node-time indices.
inline DenseAdjacency literal_blocks(const SnapshotSequence& seq, bool snapshot_diag, bool identity_diag,
                                     bool identity_next, bool snapshot_cross) {
  const std::size_t n = seq.n_nodes, steps = seq.n_steps;
  DenseAdjacency a(n * steps, std::vector<int>(n * steps, 0));
  auto adj = [&](std::size_t t, std::size_t u, std::size_t v) { return seq.snapshots[t].adjacency.contains(u, v); };
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          int& cell = a[i * n + u][j * n + v];
          if (i == j && snapshot_diag && (u == v || adj(i, u, v))) cell = 1;
          if (i == j && identity_diag && u == v) cell = 1;
          if (j == i + 1 && identity_next && u == v) cell = 1;
          if (i < j && snapshot_cross && adj(j, u, v)) cell = 1;
        }
      }
    }
  }
  return a;
}

inline DenseAdjacency dense_of(const AugmentedGraph& g) {
  const std::size_t nt = g.n_node_times();
  DenseAdjacency a(nt, std::vector<int>(nt, 0));
  for (const auto& e : g.edges()) a[e.src][e.dst] += 1;
  return a;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unit(rng);
  return m;
}

/// Dense row-stochastic matrix of a transition, row = destination.
inline Matrix dense_transition(const SparseCsr& pattern, const std::vector<double>& alpha) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(pattern.n_rows), static_cast<Eigen::Index>(pattern.n_cols));
  for (std::size_t r = 0; r < pattern.n_rows; ++r)
    for (std::size_t k = pattern.row_offsets[r]; k < pattern.row_offsets[r + 1]; ++k)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(pattern.col_indices[k])) += alpha[k];
  return m;
}

}  // namespace tempaug::testing
