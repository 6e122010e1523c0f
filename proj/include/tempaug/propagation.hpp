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
#include <random>
#include <vector>

#include "tempaug/attention.hpp"

namespace tempaug {

struct PropagationConfig {
  std::size_t n_layers = 2;
  double alpha = 0.1;   // initial-residual weight, constant across layers
  double lambda = 1.0;  // beta_l = min(1, lambda / l), l one-based
  bool variant = false;  // separate weights for aggregated and residual terms
  bool skip = false;     // add the layer input before the activation
  std::size_t hidden_dim = 128;
  double dropout = 0.0;  // on embeddings entering each layer, training only

  double beta(std::size_t layer) const;
  void validate() const;
};

/// w1[l] is W^l (or W1^l for the variant); w2 is empty unless variant.
struct PropagationParams {
  std::vector<Matrix> w1;
  std::vector<Matrix> w2;

  std::size_t n_parameters() const;
};

/// H0 rows = theta_r x for every node-time.
Matrix initial_embedding(const FeatureMatrix& features, const Matrix& theta_r);

/// A_hat * h.
Matrix propagate(const TransitionMatrix& transition, const Matrix& h);
/// A_hat^T * g.
Matrix propagate_transpose(const TransitionMatrix& transition, const Matrix& g);

/// ReLU( ((1-alpha) A_hat H + alpha H0) ((1-beta) I + beta W) [+ H] ).
Matrix layer_forward(const Matrix& h, const Matrix& h0, const TransitionMatrix& transition, const Matrix& w,
                     double alpha, double beta, bool skip = false);

/// ReLU( (1-alpha) A_hat H ((1-beta) I + beta W1) + alpha H0 ((1-beta) I + beta W2) [+ H] ).
Matrix layer_forward_variant(const Matrix& h, const Matrix& h0, const TransitionMatrix& transition, const Matrix& w1,
                             const Matrix& w2, double alpha, double beta, bool skip = false);

struct LayerTape {
  Matrix input;       // after dropout
  Matrix mask;        // dropout scale per entry; empty when dropout is off
  Matrix aggregated;  // A_hat * input
  Matrix mixed;       // (1-alpha) aggregated + alpha H0; standard form only
  Matrix pre;         // pre-activation
};

struct StackTape {
  std::vector<LayerTape> layers;
  std::size_t largest_buffer() const;
};

/// Applies all layers over a fixed transition. Dropout is active iff
/// `dropout_rng` is non-null and config.dropout > 0.
Matrix run_stack(const TransitionMatrix& transition, const Matrix& h0, const PropagationParams& params,
                 const PropagationConfig& config, std::mt19937_64* dropout_rng = nullptr, StackTape* tape = nullptr);

struct StackGrads {
  PropagationParams d_params;
  Matrix d_h0;
  std::vector<double> d_alpha;  // per transition edge
};

StackGrads run_stack_backward(const TransitionMatrix& transition, const Matrix& h0, const PropagationParams& params,
                              const PropagationConfig& config, const StackTape& tape, const Matrix& d_out);

/// Builds A_hat once from the initial features, then runs the stack from theta_r x.
Matrix forward(std::shared_ptr<const SparseCsr> incoming, const FeatureMatrix& features,
               const AttentionParams& attention, const PropagationParams& params, const PropagationConfig& config,
               std::mt19937_64* dropout_rng = nullptr);

/// Structural stack from theta_r x, then a temporal stack whose H0 is the
/// structural output.
Matrix forward_disentangled(std::shared_ptr<const SparseCsr> structural, std::shared_ptr<const SparseCsr> temporal,
                            const FeatureMatrix& features, const AttentionParams& attention_s,
                            const AttentionParams& attention_t, const PropagationParams& params_s,
                            const PropagationParams& params_t, const PropagationConfig& config,
                            std::mt19937_64* dropout_rng = nullptr);

}  // namespace tempaug
