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

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempaug/training.hpp"

namespace tempaug {

struct BenchPoint {
  std::size_t n_steps = 0;
  double mean_epoch_seconds = 0.0;
  double std_epoch_seconds = 0.0;
  std::size_t augmented_edges = 0;
  std::size_t parameters = 0;
  std::size_t largest_dense_buffer = 0;  // entries of the largest dense matrix in one step
  std::size_t node_times = 0;
};

struct BenchReport {
  Realization realization = Realization::SelfEvolution;
  std::vector<BenchPoint> points;
  std::optional<double> slope;  // log-log least squares of epoch time vs T
};

/// Builds one dataset per snapshot count; N and density must not depend on T.
using SequenceFamily = std::function<SnapshotSequence(std::size_t n_steps)>;

struct BenchConfig {
  TrainConfig train;
  std::size_t n_epochs = 5;
  std::size_t warmup_epochs = 3;
  double min_epoch_seconds = 1e-4;  // below this the timer is not trusted
};

/// Wall-clock seconds per training epoch (forward, backward, Adam step) for
/// each T. Every labeled node-time is in the training set.
BenchReport measure_epoch_time(const SequenceFamily& family, std::span<const std::size_t> t_values,
                               const BenchConfig& config);

std::optional<double> loglog_slope(std::span<const double> xs, std::span<const double> ys);

struct ComplexityAudit {
  std::size_t stored_edges = 0;
  std::size_t predicted_edges_per_snapshot_e = 0;  // (E_mean + N) * T, E = mean edges per snapshot
  std::size_t predicted_edges_total_e = 0;         // (E_total + N) * T, E = edges over all snapshots
  std::size_t propagation_parameters = 0;
  std::size_t predicted_parameters = 0;  // L F^2
  std::size_t activation_entries = 0;    // layer outputs actually produced by a forward pass
  std::size_t predicted_activations = 0;  // L T N F
  std::size_t sequential_stages = 0;      // layer applications in sequence
  double constant = 4.0;

  bool edges_ok_per_snapshot_e() const { return stored_edges <= constant * predicted_edges_per_snapshot_e; }
  bool edges_ok_total_e() const { return stored_edges <= constant * predicted_edges_total_e; }
  bool parameters_ok() const { return propagation_parameters <= constant * predicted_parameters; }
  bool activations_ok() const { return activation_entries <= constant * predicted_activations; }
};

ComplexityAudit complexity_audit(const SnapshotSequence& seq, const ModelConfig& config);

std::string to_json(const BenchReport& report);
void write_bench_csv(const BenchReport& report, const std::filesystem::path& path);

}  // namespace tempaug
