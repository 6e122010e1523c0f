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
#include <memory>
#include <random>

#include "support.hpp"
#include "tempaug/attention.hpp"
#include "tempaug/augment.hpp"

using namespace tempaug;
using tempaug::testing::random_matrix;

namespace {

std::shared_ptr<const SparseCsr> pattern(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> dst_src) {
  return std::make_shared<const SparseCsr>(SparseCsr::from_pairs(n, n, std::move(dst_src)));
}

AttentionParams random_params(std::mt19937_64& rng, std::size_t f, std::size_t d) {
  return {random_matrix(rng, f, d), random_matrix(rng, f, d), random_matrix(rng, f, 1), 0.2};
}

}  // namespace

TEST_CASE("scores match a dense reference on a small instance") {
  std::mt19937_64 rng(1);
  const std::size_t d = 3, f = 2;
  const Matrix x = random_matrix(rng, 4, d);
  const auto features = FeatureMatrix::explicit_rows(4, 1, x);
  const auto in = pattern(4, {{1, 0}, {2, 0}, {2, 3}, {3, 1}});
  const auto p = random_params(rng, f, d);
  const auto scores = edge_scores(*in, features, p);
  REQUIRE(scores.size() == 4);
  std::size_t k = 0;
  for (std::size_t dst = 0; dst < 4; ++dst) {
    for (std::size_t src : in->row(dst)) {
      const Eigen::VectorXd z = p.theta_l * x.row(src).transpose() + p.theta_r * x.row(dst).transpose();
      double e = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) e += p.att(i, 0) * (z(i) > 0 ? z(i) : 0.2 * z(i));
      CHECK(scores[k++] == doctest::Approx(e).epsilon(1e-14));
    }
  }
}

TEST_CASE("scores match the stacked projection on concatenated endpoint features") {
  std::mt19937_64 rng(11);
  const std::size_t d = 4, f = 3;
  const Matrix x = random_matrix(rng, 5, d);
  const auto features = FeatureMatrix::explicit_rows(5, 1, x);
  const auto in = pattern(5, {{0, 4}, {1, 0}, {1, 2}, {3, 3}, {4, 1}});
  const auto p = random_params(rng, f, d);
  Matrix stacked(f, 2 * d);
  stacked << p.theta_l, p.theta_r;
  const auto scores = edge_scores(*in, features, p);
  std::size_t k = 0;
  for (std::size_t dst = 0; dst < 5; ++dst) {
    for (std::size_t src : in->row(dst)) {
      Eigen::VectorXd joined(2 * d);
      joined << x.row(src).transpose(), x.row(dst).transpose();
      const Eigen::VectorXd z = stacked * joined;
      double e = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) e += p.att(i, 0) * (z(i) > 0 ? z(i) : 0.2 * z(i));
      CHECK(scores[k++] == doctest::Approx(e).epsilon(1e-13));
    }
  }
}

TEST_CASE("zero attention vector or zero projections give zero scores") {
  std::mt19937_64 rng(2);
  const auto features = FeatureMatrix::explicit_rows(3, 1, random_matrix(rng, 3, 4));
  const auto in = pattern(3, {{0, 1}, {1, 2}, {2, 0}, {2, 1}});
  auto p = random_params(rng, 5, 4);
  auto q = p;
  q.att.setZero();
  for (double s : edge_scores(*in, features, q)) CHECK(s == 0.0);
  q = p;
  q.theta_l.setZero();
  q.theta_r.setZero();
  for (double s : edge_scores(*in, features, q)) CHECK(s == 0.0);
}

TEST_CASE("softmax closed forms") {
  const auto in = pattern(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
  SUBCASE("single neighbour") {
    const auto tm = edge_softmax_transition(in, std::vector<double>{17.0, 0.0, 0.0, 1.0, 1.0, 1.0});
    CHECK(tm.alpha[0] == 1.0);
  }
  SUBCASE("equal scores") {
    const auto tm = edge_softmax_transition(in, std::vector<double>{0.0, 0.3, 0.3, -2.0, -2.0, -2.0});
    CHECK(tm.alpha[1] == 0.5);
    CHECK(tm.alpha[2] == 0.5);
    for (std::size_t k = 3; k < 6; ++k) CHECK(tm.alpha[k] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("zero and log three") {
    const auto tm = edge_softmax_transition(in, std::vector<double>{0.0, 0.0, std::log(3.0), 0.0, 0.0, 0.0});
    CHECK(tm.alpha[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(tm.alpha[2] == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("large scores do not overflow") {
    const auto tm = edge_softmax_transition(in, std::vector<double>{1e4, 1e4, 1e4 + std::log(3.0), 800, 900, 1000});
    CHECK(tm.alpha[2] == doctest::Approx(0.75));
    for (double a : tm.alpha) CHECK(std::isfinite(a));
  }
}

TEST_CASE("rows of adaptive and uniform transitions sum to one") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    const auto seq = tempaug::testing::random_sequence(rng, 5, 3, 0.5);
    for (auto r : {Realization::Full, Realization::SelfEvolution}) {
      const auto in = std::make_shared<const SparseCsr>(build_augmented(seq, r).joint().incoming());
      const auto tm = adaptive_transition(in, seq.features, random_params(rng, 4, seq.features.dim));
      const auto uni = uniform_transition(in);
      for (std::size_t v = 0; v < in->n_rows; ++v) {
        double s = 0.0, u = 0.0;
        for (std::size_t e = in->row_offsets[v]; e < in->row_offsets[v + 1]; ++e) {
          s += tm.alpha[e];
          u += uni.alpha[e];
          CHECK(tm.alpha[e] > 0.0);
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
        CHECK(std::abs(u - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("one-hot projection is a column gather") {
  std::mt19937_64 rng(6);
  const auto features = FeatureMatrix::one_hot(3, 2);
  const Matrix theta = random_matrix(rng, 4, 3);
  const Matrix proj = project(features, theta);
  REQUIRE(proj.rows() == 6);
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t v = 0; v < 3; ++v)
      CHECK((proj.row(static_cast<Eigen::Index>(node_time(3, v, t))).transpose() - theta.col(v)).norm() == 0.0);
  const Matrix grad = project_backward(features, Matrix::Ones(6, 4));
  CHECK(grad.rows() == 4);
  CHECK(grad.cols() == 3);
  CHECK((grad.array() == 2.0).all());
}

TEST_CASE("softmax backward matches finite differences") {
  std::mt19937_64 rng(8);
  const auto in = pattern(3, {{0, 1}, {0, 2}, {1, 0}, {2, 0}, {2, 1}, {2, 2}});
  std::vector<double> scores(6), weights(6);
  std::normal_distribution<double> g;
  for (auto& s : scores) s = g(rng);
  for (auto& w : weights) w = g(rng);
  auto objective = [&](const std::vector<double>& sc) {
    const auto tm = edge_softmax_transition(in, sc);
    double o = 0.0;
    for (std::size_t k = 0; k < 6; ++k) o += weights[k] * tm.alpha[k];
    return o;
  };
  const auto tm = edge_softmax_transition(in, scores);
  const auto d = edge_softmax_backward(tm, weights);
  for (std::size_t k = 0; k < 6; ++k) {
    auto plus = scores, minus = scores;
    plus[k] += 1e-6;
    minus[k] -= 1e-6;
    CHECK(d[k] == doctest::Approx((objective(plus) - objective(minus)) / 2e-6).epsilon(1e-6));
  }
}

TEST_CASE("parameter validation") {
  AttentionParams p{Matrix::Zero(2, 3), Matrix::Zero(2, 3), Matrix::Zero(2, 1), 0.2};
  CHECK_NOTHROW(p.validate(3));
  CHECK_THROWS_AS(p.validate(4), ValidationError);
  p.att = Matrix::Zero(3, 1);
  CHECK_THROWS_AS(p.validate(3), ValidationError);
}
