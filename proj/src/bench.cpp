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

#include "tempaug/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace tempaug {

std::optional<double> loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

BenchReport measure_epoch_time(const SequenceFamily& family, std::span<const std::size_t> t_values,
                               const BenchConfig& config) {
  config.train.validate();
  if (config.n_epochs == 0) throw ValidationError("bench: need at least one timed epoch");
  BenchReport report;
  report.realization = config.train.model.realization;
  for (std::size_t steps : t_values) {
    const SnapshotSequence seq = family(steps);
    std::vector<std::size_t> train;
    for (std::size_t k = 0; k < seq.labels.y.size(); ++k)
      if (seq.labels.y[k] != LabelTensor::kMissing) train.push_back(k);
    const ClassWeights weights = class_weights(seq.labels, train, seq.n_classes);
    const ModelGraph graph = prepare_graph(seq, config.train.model);
    ModelParams params = init_params(config.train.model, seq.features.dim, seq.n_classes, config.train.seed);
    AdamState adam = AdamState::init(params, AdamConfig{.weight_decay = config.train.weight_decay});
    const Objective obj{graph, seq.features, seq.labels, train, weights, config.train.model};
    std::mt19937_64 rng(config.train.seed + 1);

    BenchPoint point;
    point.n_steps = steps;
    point.node_times = seq.n_nodes * seq.n_steps;
    for (const auto& g : graph.incoming) point.augmented_edges += g->nnz();
    point.parameters = params.n_parameters();

    std::vector<double> times;
    for (std::size_t e = 0; e < config.warmup_epochs + config.n_epochs; ++e) {
      const auto start = std::chrono::steady_clock::now();
      LossAndGradient step = backward(obj, params, &rng);
      adam_step(adam, params, step.grads, config.train.lr);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      if (e >= config.warmup_epochs) times.push_back(took.count());
    }
    const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
    double var = 0.0;
    for (double t : times) var += (t - mean) * (t - mean);
    point.mean_epoch_seconds = mean;
    point.std_epoch_seconds = std::sqrt(var / static_cast<double>(times.size()));
    if (mean < config.min_epoch_seconds)
      throw ValidationError("bench: epoch time " + std::to_string(mean) +
                            " s is below timer resolution; enlarge the instance");
    point.largest_dense_buffer = model_forward(graph, seq.features, params, config.train.model).largest_buffer();
    report.points.push_back(point);
  }
  std::vector<double> xs, ys;
  for (const auto& p : report.points) {
    xs.push_back(static_cast<double>(p.n_steps));
    ys.push_back(p.mean_epoch_seconds);
  }
  report.slope = loglog_slope(xs, ys);
  return report;
}

ComplexityAudit complexity_audit(const SnapshotSequence& seq, const ModelConfig& config) {
  ComplexityAudit a;
  const ModelGraph graph = prepare_graph(seq, config);
  for (const auto& g : graph.incoming) a.stored_edges += g->nnz();

  std::size_t total_edges = 0;
  for (const auto& s : seq.snapshots) total_edges += s.n_edges();
  const std::size_t steps = seq.n_steps;
  const std::size_t mean_edges = (total_edges + steps - 1) / steps;
  a.predicted_edges_per_snapshot_e = (mean_edges + seq.n_nodes) * steps;
  a.predicted_edges_total_e = (total_edges + seq.n_nodes) * steps;

  const std::size_t n_classes = std::max<std::size_t>(seq.n_classes, 2);
  const ModelParams params = init_params(config, seq.features.dim, n_classes, 0);
  const std::size_t f = config.propagation.hidden_dim;
  const std::size_t l = config.propagation.n_layers;
  a.propagation_parameters = params.n_propagation_parameters();
  a.predicted_parameters = l * f * f;

  const ForwardPass pass = model_forward(graph, seq.features, params, config);
  for (const auto& st : pass.stacks) {
    for (const auto& layer : st.tape.layers) a.activation_entries += static_cast<std::size_t>(layer.pre.size());
    a.sequential_stages += st.tape.layers.size();
  }
  a.predicted_activations = l * steps * seq.n_nodes * f;
  return a;
}

std::string to_json(const BenchReport& report) {
  nlohmann::json j;
  j["realization"] = to_string(report.realization);
  j["slope"] = report.slope ? nlohmann::json(*report.slope) : nlohmann::json(nullptr);
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : report.points)
    pts.push_back({{"T", p.n_steps},
                   {"mean_epoch_seconds", p.mean_epoch_seconds},
                   {"std_epoch_seconds", p.std_epoch_seconds},
                   {"augmented_edges", p.augmented_edges},
                   {"parameters", p.parameters},
                   {"largest_dense_buffer", p.largest_dense_buffer},
                   {"node_times", p.node_times}});
  return j.dump(2);
}

void write_bench_csv(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  out << "T,mean_epoch_seconds,std_epoch_seconds,augmented_edges,parameters,largest_dense_buffer\n";
  for (const auto& p : report.points)
    out << p.n_steps << ',' << p.mean_epoch_seconds << ',' << p.std_epoch_seconds << ',' << p.augmented_edges << ','
        << p.parameters << ',' << p.largest_dense_buffer << '\n';
}

}  // namespace tempaug
