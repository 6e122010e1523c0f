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

#include "tempaug/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tempaug {

void AttentionParams::validate(std::size_t feature_dim) const {
  if (static_cast<std::size_t>(theta_l.cols()) != feature_dim || static_cast<std::size_t>(theta_r.cols()) != feature_dim)
    throw ValidationError("attention: theta columns (" + std::to_string(theta_l.cols()) + ") != feature dim (" +
                          std::to_string(feature_dim) + ")");
  if (theta_l.rows() != theta_r.rows() || att.rows() != theta_l.rows() || att.cols() != 1)
    throw ValidationError("attention: theta_l, theta_r and att disagree on hidden dim");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) throw ValidationError("attention: leaky slope must be in (0,1)");
}

Matrix project(const FeatureMatrix& features, const Matrix& theta) {
  if (static_cast<std::size_t>(theta.cols()) != features.dim)
    throw ValidationError("project: theta has " + std::to_string(theta.cols()) + " columns, features have dim " +
                          std::to_string(features.dim));
  if (features.mode == FeatureMode::Explicit) return features.rows * theta.transpose();
  const auto n = static_cast<Eigen::Index>(features.n_nodes);
  Matrix out(n * static_cast<Eigen::Index>(features.n_steps), theta.rows());
  const Matrix theta_t = theta.transpose();
  for (std::size_t t = 0; t < features.n_steps; ++t) out.middleRows(static_cast<Eigen::Index>(t) * n, n) = theta_t;
  return out;
}

Matrix project_backward(const FeatureMatrix& features, const Matrix& d_proj) {
  if (features.mode == FeatureMode::Explicit) return d_proj.transpose() * features.rows;
  const auto n = static_cast<Eigen::Index>(features.n_nodes);
  Matrix acc = Matrix::Zero(n, d_proj.cols());
  for (std::size_t t = 0; t < features.n_steps; ++t) acc += d_proj.middleRows(static_cast<Eigen::Index>(t) * n, n);
  return acc.transpose();
}

std::vector<double> edge_scores(const SparseCsr& incoming, const Matrix& proj_src, const Matrix& proj_dst,
                                const Matrix& att, double leaky_slope) {
  if (proj_src.cols() != att.rows() || proj_dst.cols() != att.rows())
    throw ValidationError("edge_scores: projection width != attention vector length");
  if (static_cast<std::size_t>(proj_src.rows()) != incoming.n_cols ||
      static_cast<std::size_t>(proj_dst.rows()) != incoming.n_rows)
    throw ValidationError("edge_scores: projection rows != node-time count");
  const auto f = att.rows();
  std::vector<double> scores(incoming.nnz());
  for (std::size_t v = 0; v < incoming.n_rows; ++v) {
    const double* dst = proj_dst.row(static_cast<Eigen::Index>(v)).data();
    for (std::size_t k = incoming.row_offsets[v]; k < incoming.row_offsets[v + 1]; ++k) {
      const double* src = proj_src.row(static_cast<Eigen::Index>(incoming.col_indices[k])).data();
      double e = 0.0;
      for (Eigen::Index c = 0; c < f; ++c) e += att(c, 0) * leaky_relu(src[c] + dst[c], leaky_slope);
      scores[k] = e;
    }
  }
  return scores;
}

std::vector<double> edge_scores(const SparseCsr& incoming, const FeatureMatrix& features,
                                const AttentionParams& params) {
  params.validate(features.dim);
  return edge_scores(incoming, project(features, params.theta_l), project(features, params.theta_r), params.att,
                     params.leaky_slope);
}

TransitionMatrix edge_softmax_transition(std::shared_ptr<const SparseCsr> incoming, std::span<const double> scores) {
  if (scores.size() != incoming->nnz()) throw ValidationError("edge_softmax: one score per edge required");
  TransitionMatrix tm{std::move(incoming), std::vector<double>(scores.size())};
  const auto& offsets = tm.pattern->row_offsets;
  for (std::size_t v = 0; v < tm.pattern->n_rows; ++v) {
    const std::size_t begin = offsets[v], end = offsets[v + 1];
    if (begin == end) continue;
    const double shift = *std::max_element(scores.begin() + static_cast<std::ptrdiff_t>(begin),
                                           scores.begin() + static_cast<std::ptrdiff_t>(end));
    double total = 0.0;
    for (std::size_t k = begin; k < end; ++k) total += tm.alpha[k] = std::exp(scores[k] - shift);
    for (std::size_t k = begin; k < end; ++k) tm.alpha[k] /= total;
  }
  return tm;
}

TransitionMatrix uniform_transition(std::shared_ptr<const SparseCsr> incoming) {
  TransitionMatrix tm{std::move(incoming), {}};
  tm.alpha.resize(tm.pattern->nnz());
  const auto& offsets = tm.pattern->row_offsets;
  for (std::size_t v = 0; v < tm.pattern->n_rows; ++v) {
    const std::size_t deg = offsets[v + 1] - offsets[v];
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) tm.alpha[k] = 1.0 / static_cast<double>(deg);
  }
  return tm;
}

TransitionMatrix adaptive_transition(std::shared_ptr<const SparseCsr> incoming, const FeatureMatrix& features,
                                     const AttentionParams& params) {
  const auto scores = edge_scores(*incoming, features, params);
  return edge_softmax_transition(std::move(incoming), scores);
}

std::vector<double> edge_softmax_backward(const TransitionMatrix& tm, std::span<const double> d_alpha) {
  std::vector<double> d_scores(tm.alpha.size());
  const auto& offsets = tm.pattern->row_offsets;
  for (std::size_t v = 0; v < tm.pattern->n_rows; ++v) {
    double dot = 0.0;
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) dot += tm.alpha[k] * d_alpha[k];
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) d_scores[k] = tm.alpha[k] * (d_alpha[k] - dot);
  }
  return d_scores;
}

ScoreGrads edge_scores_backward(const SparseCsr& incoming, const Matrix& proj_src, const Matrix& proj_dst,
                                const Matrix& att, double leaky_slope, std::span<const double> d_scores) {
  const auto f = att.rows();
  ScoreGrads g{Matrix::Zero(proj_src.rows(), f), Matrix::Zero(proj_dst.rows(), f), Matrix::Zero(f, 1)};
  for (std::size_t v = 0; v < incoming.n_rows; ++v) {
    const double* dst = proj_dst.row(static_cast<Eigen::Index>(v)).data();
    double* d_dst = g.d_proj_dst.row(static_cast<Eigen::Index>(v)).data();
    for (std::size_t k = incoming.row_offsets[v]; k < incoming.row_offsets[v + 1]; ++k) {
      const double ds = d_scores[k];
      if (ds == 0.0) continue;
      const auto u = static_cast<Eigen::Index>(incoming.col_indices[k]);
      const double* src = proj_src.row(u).data();
      double* d_src = g.d_proj_src.row(u).data();
      for (Eigen::Index c = 0; c < f; ++c) {
        const double z = src[c] + dst[c];
        g.d_att(c, 0) += ds * leaky_relu(z, leaky_slope);
        const double dz = ds * att(c, 0) * (z > 0.0 ? 1.0 : leaky_slope);
        d_src[c] += dz;
        d_dst[c] += dz;
      }
    }
  }
  return g;
}

}  // namespace tempaug
