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
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tempaug/evaluation.hpp"
#include "tempaug/model.hpp"

namespace tempaug {

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// w_c = n / (C * n_c) over the training node-times.
struct ClassWeights {
  std::vector<double> w;
};

ClassWeights class_weights(const LabelTensor& labels, std::span<const std::size_t> train_set, std::size_t n_classes,
                           Warnings* warnings = nullptr);

struct LossResult {
  double value = 0.0;
  Matrix d_logits;
};

/// sum_i w_{y_i} * -log softmax(logits_i)[y_i], log-sum-exp stabilized.
LossResult weighted_cross_entropy(const Matrix& logits, std::span<const int> targets, const ClassWeights& weights);

/// Decoder applied in eval mode to the rows of `h_final` in `train_set`.
double loss(const Matrix& h_final, const DecoderParams& decoder, const LabelTensor& labels,
            std::span<const std::size_t> train_set, const ClassWeights& weights);

/// Everything the training objective depends on besides the parameters.
struct Objective {
  const ModelGraph& graph;
  const FeatureMatrix& features;
  const LabelTensor& labels;
  std::span<const std::size_t> train_set;
  const ClassWeights& weights;
  const ModelConfig& config;
};

struct LossAndGradient {
  double loss = 0.0;
  ModelParams grads;
};

/// Forward pass, loss, and exact reverse-mode gradients for every parameter.
/// Dropout (propagation and decoder) is active iff `dropout_rng` is non-null.
LossAndGradient backward(const Objective& objective, const ModelParams& params,
                         std::mt19937_64* dropout_rng = nullptr);

double objective_value(const Objective& objective, const ModelParams& params, std::mt19937_64* dropout_rng = nullptr);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 5e-4;  // L2 added to the gradient; biases excluded
};

struct AdamState {
  AdamConfig hyper;
  std::vector<Matrix> first;
  std::vector<Matrix> second;
  std::size_t step = 0;

  static AdamState init(const ModelParams& params, AdamConfig hyper);
};

void adam_step(AdamState& state, ModelParams& params, const ModelParams& grads, double lr);

struct PlateauConfig {
  double factor = 0.5;
  std::size_t patience = 10;
  double min_lr = 1e-4;
};

/// Multiplies the learning rate by `factor` once the monitored metric has
/// failed to improve for more than `patience` consecutive epochs.
class PlateauScheduler {
 public:
  PlateauScheduler(double lr, PlateauConfig config) : lr_(lr), config_(config) {}

  double lr() const { return lr_; }
  /// Records a metric (higher is better) and returns the learning rate for the next epoch.
  double step(double metric);

 private:
  double lr_;
  PlateauConfig config_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::size_t bad_epochs_ = 0;
};

struct TrainConfig {
  ModelConfig model;
  std::size_t epochs = 200;
  double lr = 0.01;
  double weight_decay = 5e-4;
  PlateauConfig plateau;
  std::uint64_t seed = 0;
  AucPooling pooling = AucPooling::Pooled;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // one-based
  double train_loss = 0.0;
  double val_macro_auc = 0.0;
  double lr = 0.0;  // rate used for this epoch's step
};

struct FitResult {
  ModelParams best_params;
  std::vector<EpochRecord> history;
  std::optional<std::size_t> best_epoch;
  ClassWeights weights;
  Warnings warnings;
};

/// Full-batch training, one Adam step per epoch, best-validation checkpointing.
FitResult fit(const SnapshotSequence& seq, const Split& split, const TrainConfig& config);

/// Class probabilities (eval mode) for the given node-time rows.
Matrix predict_proba(const ModelGraph& graph, const FeatureMatrix& features, const ModelParams& params,
                     const ModelConfig& config, std::span<const std::size_t> rows);

EvalReport evaluate(const SnapshotSequence& seq, const ModelGraph& graph, const ModelParams& params,
                    const ModelConfig& config, std::span<const std::size_t> rows,
                    AucPooling pooling = AucPooling::Pooled);

void write_history_csv(const std::vector<EpochRecord>& history, const std::filesystem::path& path);

struct GradCheckConfig {
  std::size_t n_nodes = 8;
  std::size_t n_steps = 3;
  std::size_t n_blocks = 3;
  std::size_t hidden_dim = 4;
  std::size_t n_layers = 2;
  Realization realization = Realization::SelfEvolution;
  bool variant = false;
  bool skip = false;
  bool tie_embedding = true;
  bool explicit_features = false;  // random dense features instead of one-hot ids
  double dropout = 0.0;
  double decoder_dropout = 0.0;
  /// Positive features and weights so every ReLU and LeakyReLU stays in its linear piece.
  bool positive_regime = false;
  /// Input projections are multiplied and the attention vector and decoder output
  /// weights divided by this factor, so pre-activations sit further from their kinks
  /// without sharpening the softmaxes.
  double param_scale = 30.0;
  std::uint64_t seed = 1;
  double step = 1e-5;
  double kink_margin = 1e-3;
  std::size_t max_entries_per_tensor = 200;
  std::size_t max_attempts = 1000;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_entry;
  std::size_t n_checked = 0;
  std::size_t attempts = 0;   // instances drawn before one cleared the kink margin
  double kink_distance = 0.0;  // min |pre-activation| of the accepted instance
};

/// Relative error used by the check: |a - b| / max(|a|, |b|, 1e-3).
double gradient_rel_error(double analytic, double numeric);

/// Compares backward() with central differences on a random instance.
GradCheckResult gradient_check(const GradCheckConfig& config);

}  // namespace tempaug
