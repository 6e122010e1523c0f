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

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tempaug/augment.hpp"
#include "tempaug/propagation.hpp"

namespace tempaug {

struct ModelConfig {
  Realization realization = Realization::SelfEvolution;
  bool time_augmentation = true;    // false: diagonal-only (static) graph
  bool adaptive_transition = true;  // false: uniform 1/in-degree transition
  bool tie_embedding = true;        // H0 uses the attention theta_r
  PropagationConfig propagation;
  double leaky_slope = 0.2;
  double decoder_dropout = 0.3;

  bool disentangled() const { return time_augmentation && realization == Realization::Disentangled; }
  std::size_t n_stacks() const { return disentangled() ? 2 : 1; }
  void validate() const;
};

/// F -> F -> C MLP with ReLU and dropout between the layers.
struct DecoderParams {
  Matrix w1;  // F x F
  Matrix b1;  // 1 x F
  Matrix w2;  // C x F
  Matrix b2;  // 1 x C
};

struct ModelParams {
  std::vector<AttentionParams> attention;  // one per stack
  Matrix embedding;                        // untied H0 projection; empty when tied
  std::vector<PropagationParams> stacks;
  DecoderParams decoder;

  struct Entry {
    std::string name;
    Matrix* value;
    bool is_bias;
  };
  struct ConstEntry {
    std::string name;
    const Matrix* value;
    bool is_bias;
  };

  /// Every learnable tensor in a fixed order.
  std::vector<Entry> entries();
  std::vector<ConstEntry> entries() const;

  std::size_t n_parameters() const;
  std::size_t n_propagation_parameters() const;
  ModelParams zeros_like() const;
  const Matrix& embedding_theta() const { return embedding.size() > 0 ? embedding : attention.front().theta_r; }
};

/// Glorot-uniform weights (including att), zero biases.
ModelParams init_params(const ModelConfig& config, std::size_t feature_dim, std::size_t n_classes,
                        std::uint64_t seed);

/// Incoming-edge patterns, one per propagation stack. Built once per dataset.
struct ModelGraph {
  std::vector<std::shared_ptr<const SparseCsr>> incoming;
};

ModelGraph prepare_graph(const SnapshotSequence& seq, const ModelConfig& config);

struct StackState {
  TransitionMatrix transition;
  Matrix proj_src;  // theta_l x, kept for the attention backward pass
  Matrix proj_dst;  // theta_r x
  Matrix h0;
  StackTape tape;
  Matrix output;
};

struct ForwardPass {
  std::vector<StackState> stacks;
  const Matrix& output() const { return stacks.back().output; }
  std::size_t largest_buffer() const;
};

/// Transitions are computed once per call from the initial features and
/// shared by every layer of their stack.
ForwardPass model_forward(const ModelGraph& graph, const FeatureMatrix& features, const ModelParams& params,
                          const ModelConfig& config, std::mt19937_64* dropout_rng = nullptr);

/// Gradients of every parameter given dL/dH^L. Returned in ModelParams shape.
ModelParams model_backward(const ModelGraph& graph, const FeatureMatrix& features, const ModelParams& params,
                           const ModelConfig& config, const ForwardPass& pass, const Matrix& d_output);

struct DecoderTape {
  Matrix input;
  Matrix hidden_pre;
  Matrix mask;  // empty when dropout is off
  Matrix hidden;
};

Matrix decoder_forward(const DecoderParams& decoder, const Matrix& input, double dropout,
                       std::mt19937_64* dropout_rng = nullptr, DecoderTape* tape = nullptr);

/// Accumulates decoder gradients into `grads` and returns dL/d input.
Matrix decoder_backward(const DecoderParams& decoder, const DecoderTape& tape, const Matrix& d_logits,
                        DecoderParams& grads);

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows);

}  // namespace tempaug
