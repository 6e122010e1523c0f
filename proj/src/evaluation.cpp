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

#include "tempaug/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

namespace tempaug {

std::optional<double> binary_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        positive_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

namespace {

std::optional<double> class_auc(const Matrix& probabilities, std::span<const int> labels,
                                std::span<const std::size_t> rows, int c) {
  std::vector<double> scores;
  std::vector<int> is_c;
  scores.reserve(rows.size());
  is_c.reserve(rows.size());
  for (std::size_t r : rows) {
    scores.push_back(probabilities(static_cast<Eigen::Index>(r), c));
    is_c.push_back(labels[r] == c ? 1 : 0);
  }
  return binary_auc(scores, is_c);
}

}  // namespace

EvalReport macro_auc(const Matrix& probabilities, std::span<const int> labels, std::span<const std::size_t> steps,
                     AucPooling pooling) {
  if (static_cast<std::size_t>(probabilities.rows()) != labels.size())
    throw ValidationError("macro_auc: one probability row per label required");
  if (pooling == AucPooling::PerStep && steps.size() != labels.size())
    throw ValidationError("macro_auc: per-step pooling needs a step per example");
  for (Eigen::Index r = 0; r < probabilities.rows(); ++r)
    if (std::abs(probabilities.row(r).sum() - 1.0) > 1e-6)
      throw ValidationError("macro_auc: probability rows must sum to 1");

  EvalReport report;
  report.pooling = pooling;
  report.n_examples = labels.size();
  const auto n_classes = static_cast<int>(probabilities.cols());

  std::map<std::size_t, std::vector<std::size_t>> groups;
  if (pooling == AucPooling::Pooled) {
    auto& all = groups[0];
    all.resize(labels.size());
    std::iota(all.begin(), all.end(), 0);
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) groups[steps[i]].push_back(i);
  }

  double total = 0.0;
  std::size_t defined = 0;
  for (int c = 0; c < n_classes; ++c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [step, rows] : groups) {
      if (auto auc = class_auc(probabilities, labels, rows, c)) {
        sum += *auc;
        ++count;
      }
    }
    if (count == 0) {
      report.per_class_auc.push_back(std::nullopt);
      report.warnings.push_back("macro_auc: class " + std::to_string(c) + " AUC undefined (single class present)");
      continue;
    }
    const double auc = sum / static_cast<double>(count);
    report.per_class_auc.push_back(auc);
    total += auc;
    ++defined;
  }
  if (defined == 0) throw ValidationError("macro_auc: AUC undefined for every class");
  report.macro_auc = total / static_cast<double>(defined);
  return report;
}

std::string to_json(const EvalReport& report, const std::string& split_name) {
  nlohmann::json j;
  j["split"] = split_name;
  j["macro_auc"] = report.macro_auc;
  j["n_examples"] = report.n_examples;
  j["pooling"] = report.pooling == AucPooling::Pooled ? "pooled" : "per_step";
  auto& per = j["per_class_auc"] = nlohmann::json::array();
  for (const auto& a : report.per_class_auc) per.push_back(a ? nlohmann::json(*a) : nlohmann::json(nullptr));
  j["warnings"] = report.warnings;
  return j.dump(2);
}

void write_per_class_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "class,auc\n";
  for (std::size_t c = 0; c < report.per_class_auc.size(); ++c) {
    out << c << ',';
    if (report.per_class_auc[c]) out << *report.per_class_auc[c];
    out << '\n';
  }
}

}  // namespace tempaug
