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
#include <random>

#include "support.hpp"
#include "tempaug/evaluation.hpp"

using namespace tempaug;

namespace {

std::optional<double> pairwise_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  if (pairs == 0.0) return std::nullopt;
  return wins / pairs;
}

double pairwise_macro(const Matrix& p, const std::vector<int>& y) {
  double total = 0.0;
  int defined = 0;
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    std::vector<double> s(y.size());
    std::vector<int> b(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      s[i] = p(static_cast<Eigen::Index>(i), c);
      b[i] = y[i] == c ? 1 : 0;
    }
    if (auto a = pairwise_auc(s, b)) {
      total += *a;
      ++defined;
    }
  }
  return total / defined;
}

Matrix random_probs(std::mt19937_64& rng, std::size_t n, std::size_t c, bool coarse) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) p(i, k) = coarse ? 1.0 + std::floor(unit(rng) * 4) : unit(rng);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

}  // namespace

TEST_CASE("binary auc closed cases") {
  CHECK(*binary_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}) == 0.75);
  CHECK(*binary_auc(std::vector<double>{0.1, 0.2, 0.3, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(*binary_auc(std::vector<double>{0.3, 0.3, 0.3, 0.3, 0.3}, std::vector<int>{0, 1, 0, 1, 1}) == 0.5);
  CHECK_FALSE(binary_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}).has_value());
  CHECK_THROWS_AS(binary_auc(std::vector<double>{0.1}, std::vector<int>{1, 0}), ValidationError);
}

TEST_CASE("binary auc equals the pairwise oracle on random instances") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial % 2 == 0 ? std::round(unit(rng) * 10) / 10 : unit(rng);
      y[i] = unit(rng) < 0.3 ? 1 : 0;
    }
    const auto expected = pairwise_auc(s, y);
    const auto got = binary_auc(s, y);
    REQUIRE(expected.has_value() == got.has_value());
    if (got) CHECK(std::abs(*got - *expected) <= 1e-12);
  }
}

TEST_CASE("macro auc equals the pairwise oracle on random instances") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> size(6, 200);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = trial == 0 ? 30 : size(rng);
    const std::size_t c = trial == 0 ? 3 : 2 + trial % 4;
    const Matrix p = random_probs(rng, n, c, trial % 3 == 0);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>((i * 7 + static_cast<std::size_t>(trial)) % c);
    const auto report = macro_auc(p, y);
    CHECK(std::abs(report.macro_auc - pairwise_macro(p, y)) <= 1e-12);
    CHECK(report.n_examples == n);
  }
}

TEST_CASE("two-class macro auc is the class-one auc") {
  std::mt19937_64 rng(13);
  const Matrix p = random_probs(rng, 40, 2, false);
  std::vector<int> y(40);
  std::vector<double> s(40);
  for (std::size_t i = 0; i < 40; ++i) {
    y[i] = static_cast<int>(i % 3 == 0);
    s[i] = p(static_cast<Eigen::Index>(i), 1);
  }
  const auto report = macro_auc(p, y);
  CHECK(*report.per_class_auc[0] == doctest::Approx(*report.per_class_auc[1]).epsilon(1e-14));
  CHECK(report.macro_auc == doctest::Approx(*binary_auc(s, y)).epsilon(1e-14));
}

TEST_CASE("oracle probabilities score one") {
  const std::vector<int> y{0, 2, 1, 1, 2, 0};
  Matrix p = Matrix::Zero(6, 3);
  for (Eigen::Index i = 0; i < 6; ++i) p(i, y[static_cast<std::size_t>(i)]) = 1.0;
  CHECK(macro_auc(p, y).macro_auc == 1.0);
}

TEST_CASE("absent classes are skipped with a warning") {
  Matrix p(4, 3);
  p << 0.6, 0.3, 0.1, 0.2, 0.7, 0.1, 0.5, 0.4, 0.1, 0.1, 0.8, 0.1;
  const auto report = macro_auc(p, std::vector<int>{0, 1, 0, 1});
  CHECK_FALSE(report.per_class_auc[2].has_value());
  CHECK(report.warnings.size() == 1);
  CHECK(report.macro_auc == 1.0);
  CHECK_THROWS_AS(macro_auc(p.topRows(2), std::vector<int>{0, 0}), ValidationError);
}

TEST_CASE("per-step pooling averages within steps first") {
  Matrix p(8, 2);
  std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1};
  std::vector<std::size_t> steps{0, 0, 0, 0, 1, 1, 1, 1};
  // Step 0 is perfectly ordered, step 1 is reversed; pooled ranking mixes them.
  const double s1[8] = {0.1, 0.9, 0.2, 0.8, 0.6, 0.4, 0.7, 0.3};
  for (Eigen::Index i = 0; i < 8; ++i) p.row(i) << 1 - s1[i], s1[i];
  const auto per = macro_auc(p, y, steps, AucPooling::PerStep);
  CHECK(per.macro_auc == 0.5);
  const auto pooled = macro_auc(p, y, steps, AucPooling::Pooled);
  CHECK(pooled.macro_auc == doctest::Approx(*pairwise_auc(std::vector<double>(s1, s1 + 8), y)).epsilon(1e-14));
  CHECK_THROWS_AS(macro_auc(p, y, std::vector<std::size_t>{0}, AucPooling::PerStep), ValidationError);
}

TEST_CASE("rows must be probability vectors") {
  Matrix p(2, 2);
  p << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(macro_auc(p, std::vector<int>{0, 1}), ValidationError);
}

TEST_CASE("report serialization") {
  Matrix p(4, 2);
  p << 0.9, 0.1, 0.2, 0.8, 0.7, 0.3, 0.4, 0.6;
  const auto report = macro_auc(p, std::vector<int>{0, 1, 0, 1});
  const auto json = to_json(report, "test");
  CHECK(json.find("\"split\": \"test\"") != std::string::npos);
  CHECK(json.find("\"macro_auc\": 1.0") != std::string::npos);
  const auto dir = tempaug::testing::scratch_dir("eval");
  write_per_class_csv(report, dir / "c.csv");
  CHECK(tempaug::testing::read_file(dir / "c.csv").find("class,auc") == 0);
}
