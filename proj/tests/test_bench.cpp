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

#include <cmath>

#include "support.hpp"
#include "tempaug/bench.hpp"

using namespace tempaug;

namespace {

ModelConfig small_model(std::size_t f, std::size_t layers, bool variant = false) {
  ModelConfig m;
  m.propagation.hidden_dim = f;
  m.propagation.n_layers = layers;
  m.propagation.variant = variant;
  return m;
}

}  // namespace

TEST_CASE("log-log slope") {
  const std::vector<double> xs{2, 4, 8, 16};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, 1.1));
  CHECK(*loglog_slope(xs, ys) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK_FALSE(loglog_slope(std::vector<double>{2}, std::vector<double>{1}).has_value());
  CHECK_FALSE(loglog_slope(std::vector<double>{2, 2}, std::vector<double>{1, 3}).has_value());
}

TEST_CASE("activation count matches layers by node-times by width") {
  const auto seq = synth_dsbm({100, 4, 4, 0.2, 0.02, 0.1, 7});
  const auto audit = complexity_audit(seq, small_model(8, 2));
  CHECK(audit.activation_entries == 6400);
  CHECK(audit.predicted_activations == 6400);
  CHECK(audit.activations_ok());
  CHECK(audit.parameters_ok());
  CHECK(audit.edges_ok_per_snapshot_e());
  CHECK(audit.edges_ok_total_e());
}

TEST_CASE("single layer propagation parameters") {
  const auto seq = synth_dsbm({20, 2, 2, 0.3, 0.05, 0.1, 1});
  CHECK(complexity_audit(seq, small_model(8, 1)).propagation_parameters == 64);
  CHECK(complexity_audit(seq, small_model(8, 1, true)).propagation_parameters == 128);
}

TEST_CASE("sequential stages and parameters do not grow with the number of snapshots") {
  std::optional<std::size_t> params;
  for (std::size_t steps : {2, 4, 8}) {
    const auto seq = synth_dsbm({30, steps, 3, 0.2, 0.02, 0.1, 2});
    const auto audit = complexity_audit(seq, small_model(4, 3));
    CHECK(audit.sequential_stages == 3);
    if (params) CHECK(audit.propagation_parameters == *params);
    params = audit.propagation_parameters;
  }
}

TEST_CASE("timings under the floor are rejected") {
  BenchConfig c;
  c.train.model = small_model(2, 1);
  c.n_epochs = 1;
  c.warmup_epochs = 0;
  c.min_epoch_seconds = 1e6;
  const std::vector<std::size_t> ts{2};
  CHECK_THROWS_WITH(
      measure_epoch_time([](std::size_t steps) { return synth_dsbm({8, steps, 2, 0.5, 0.1, 0.1, 1}); }, ts, c),
      doctest::Contains("timer resolution"));
}

TEST_CASE("full realization stores quadratically many cross edges") {
  const auto seq = synth_dsbm({30, 6, 3, 0.3, 0.05, 0.1, 3});
  auto m = small_model(4, 2);
  m.realization = Realization::Full;
  const auto full = complexity_audit(seq, m);
  m.realization = Realization::SelfEvolution;
  const auto se = complexity_audit(seq, m);
  CHECK(full.stored_edges > se.stored_edges);
  CHECK(se.edges_ok_per_snapshot_e());
}

TEST_CASE("epoch timing sweep") {
  BenchConfig c;
  c.train.model = small_model(8, 2);
  c.n_epochs = 2;
  c.warmup_epochs = 1;
  c.min_epoch_seconds = 0.0;
  const std::vector<std::size_t> ts{2, 4};
  const auto report =
      measure_epoch_time([](std::size_t steps) { return synth_dsbm({40, steps, 2, 0.2, 0.02, 0.1, 5}); }, ts, c);
  REQUIRE(report.points.size() == 2);
  CHECK(report.slope.has_value());
  CHECK(report.points[0].parameters == report.points[1].parameters);
  for (const auto& p : report.points) {
    CHECK(p.mean_epoch_seconds > 0.0);
    CHECK(p.node_times == 40 * p.n_steps);
    CHECK(p.largest_dense_buffer < p.node_times * p.node_times);
  }
  CHECK(report.points[1].augmented_edges > report.points[0].augmented_edges);

  const std::vector<std::size_t> one{2};
  const auto single =
      measure_epoch_time([](std::size_t steps) { return synth_dsbm({20, steps, 2, 0.2, 0.02, 0.1, 5}); }, one, c);
  CHECK_FALSE(single.slope.has_value());
  CHECK(to_json(single).find("\"slope\": null") != std::string::npos);

  const auto dir = tempaug::testing::scratch_dir("bench");
  write_bench_csv(report, dir / "b.csv");
  const auto csv = tempaug::testing::read_file(dir / "b.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
