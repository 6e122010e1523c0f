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

#include <memory>
#include <span>
#include <vector>

#include "tempaug/graph.hpp"

namespace tempaug {

/// Dynamic attention: e_uv = att . LeakyReLU(theta_l x_u + theta_r x_v).
struct AttentionParams {
  Matrix theta_l;  // F x d, applied to the source node-time
  Matrix theta_r;  // F x d, applied to the destination node-time
  Matrix att;      // F x 1
  double leaky_slope = 0.2;

  std::size_t hidden_dim() const { return static_cast<std::size_t>(theta_l.rows()); }
  void validate(std::size_t feature_dim) const;
};

/// Row-stochastic weights over an incoming-edge pattern: row v holds
/// alpha_uv for every in-neighbor u of v, so (A_hat H)_v = sum_u alpha_uv H_u.
struct TransitionMatrix {
  std::shared_ptr<const SparseCsr> pattern;
  std::vector<double> alpha;

  std::size_t n_rows() const { return pattern->n_rows; }
};

/// Rows of X theta^T, i.e. theta x for every node-time (T*N x F).
/// One-hot features gather columns of theta instead of multiplying.
Matrix project(const FeatureMatrix& features, const Matrix& theta);

/// Gradient w.r.t. theta of sum(d_proj .* project(features, theta)).
Matrix project_backward(const FeatureMatrix& features, const Matrix& d_proj);

inline double leaky_relu(double z, double slope) { return z > 0.0 ? z : slope * z; }

/// Scores for every edge of `incoming`, in CSR order.
std::vector<double> edge_scores(const SparseCsr& incoming, const Matrix& proj_src, const Matrix& proj_dst,
                                const Matrix& att, double leaky_slope);

std::vector<double> edge_scores(const SparseCsr& incoming, const FeatureMatrix& features,
                                const AttentionParams& params);

/// Softmax of scores over each destination's in-neighborhood (max-shifted).
TransitionMatrix edge_softmax_transition(std::shared_ptr<const SparseCsr> incoming, std::span<const double> scores);

/// alpha_uv = 1 / in_degree(v); the non-adaptive transition.
TransitionMatrix uniform_transition(std::shared_ptr<const SparseCsr> incoming);

/// Scores -> transition in one call.
TransitionMatrix adaptive_transition(std::shared_ptr<const SparseCsr> incoming, const FeatureMatrix& features,
                                     const AttentionParams& params);

/// d_score_uv = alpha_uv (d_alpha_uv - sum_u' alpha_u'v d_alpha_u'v).
std::vector<double> edge_softmax_backward(const TransitionMatrix& transition, std::span<const double> d_alpha);

struct ScoreGrads {
  Matrix d_proj_src;
  Matrix d_proj_dst;
  Matrix d_att;
};

ScoreGrads edge_scores_backward(const SparseCsr& incoming, const Matrix& proj_src, const Matrix& proj_dst,
                                const Matrix& att, double leaky_slope, std::span<const double> d_scores);

}  // namespace tempaug
