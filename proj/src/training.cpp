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

#include "tempaug/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace tempaug {

ClassWeights class_weights(const LabelTensor& labels, std::span<const std::size_t> train_set, std::size_t n_classes,
                           Warnings* warnings) {
  if (train_set.empty()) throw ValidationError("class_weights: empty train set");
  std::vector<std::size_t> counts(n_classes, 0);
  for (std::size_t k : train_set) {
    const int y = labels.y[k];
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes) throw ValidationError("class_weights: unlabeled train node-time");
    ++counts[static_cast<std::size_t>(y)];
  }
  ClassWeights cw;
  cw.w.assign(n_classes, 0.0);
  const double n = static_cast<double>(train_set.size());
  double largest = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 0) continue;
    cw.w[c] = n / (static_cast<double>(n_classes) * static_cast<double>(counts[c]));
    largest = std::max(largest, cw.w[c]);
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] > 0) continue;
    cw.w[c] = largest;
    warn(warnings, "class_weights: class " + std::to_string(c) + " absent from train set; using max weight");
  }
  return cw;
}

LossResult weighted_cross_entropy(const Matrix& logits, std::span<const int> targets, const ClassWeights& weights) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size())
    throw ValidationError("loss: one target per logit row required");
  if (!logits.allFinite()) throw TrainingDiverged("loss: non-finite logits");
  LossResult r;
  r.d_logits.resize(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const auto y = targets[static_cast<std::size_t>(i)];
    const double w = weights.w[static_cast<std::size_t>(y)];
    const double shift = logits.row(i).maxCoeff();
    double total = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) total += std::exp(logits(i, c) - shift);
    const double lse = shift + std::log(total);
    r.value += w * (lse - logits(i, y));
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      r.d_logits(i, c) = w * (std::exp(logits(i, c) - lse) - (c == y ? 1.0 : 0.0));
  }
  return r;
}

namespace {

std::vector<int> targets_of(const LabelTensor& labels, std::span<const std::size_t> rows) {
  std::vector<int> t;
  t.reserve(rows.size());
  for (std::size_t k : rows) t.push_back(labels.y[k]);
  return t;
}

std::string first_non_finite(const ModelParams& params) {
  for (const auto& e : params.entries())
    if (!e.value->allFinite()) return e.name;
  return "(none; all parameters finite)";
}

}  // namespace

double loss(const Matrix& h_final, const DecoderParams& decoder, const LabelTensor& labels,
            std::span<const std::size_t> train_set, const ClassWeights& weights) {
  const Matrix logits = decoder_forward(decoder, gather_rows(h_final, train_set), 0.0);
  return weighted_cross_entropy(logits, targets_of(labels, train_set), weights).value;
}

LossAndGradient backward(const Objective& obj, const ModelParams& params, std::mt19937_64* dropout_rng) {
  const ForwardPass pass = model_forward(obj.graph, obj.features, params, obj.config, dropout_rng);
  DecoderTape tape;
  const Matrix logits = decoder_forward(params.decoder, gather_rows(pass.output(), obj.train_set),
                                        obj.config.decoder_dropout, dropout_rng, &tape);
  if (!logits.allFinite())
    throw TrainingDiverged("loss: non-finite logits; first non-finite parameter: " + first_non_finite(params));
  LossResult lr = weighted_cross_entropy(logits, targets_of(obj.labels, obj.train_set), obj.weights);

  DecoderParams d_decoder{Matrix::Zero(params.decoder.w1.rows(), params.decoder.w1.cols()),
                          Matrix::Zero(1, params.decoder.b1.cols()),
                          Matrix::Zero(params.decoder.w2.rows(), params.decoder.w2.cols()),
                          Matrix::Zero(1, params.decoder.b2.cols())};
  const Matrix d_rows = decoder_backward(params.decoder, tape, lr.d_logits, d_decoder);
  Matrix d_output = Matrix::Zero(pass.output().rows(), pass.output().cols());
  for (std::size_t i = 0; i < obj.train_set.size(); ++i)
    d_output.row(static_cast<Eigen::Index>(obj.train_set[i])) += d_rows.row(static_cast<Eigen::Index>(i));

  LossAndGradient out{lr.value, model_backward(obj.graph, obj.features, params, obj.config, pass, d_output)};
  out.grads.decoder = std::move(d_decoder);
  return out;
}

double objective_value(const Objective& obj, const ModelParams& params, std::mt19937_64* dropout_rng) {
  const ForwardPass pass = model_forward(obj.graph, obj.features, params, obj.config, dropout_rng);
  const Matrix logits = decoder_forward(params.decoder, gather_rows(pass.output(), obj.train_set),
                                        obj.config.decoder_dropout, dropout_rng);
  return weighted_cross_entropy(logits, targets_of(obj.labels, obj.train_set), obj.weights).value;
}

AdamState AdamState::init(const ModelParams& params, AdamConfig hyper) {
  AdamState s;
  s.hyper = hyper;
  for (const auto& e : params.entries()) {
    s.first.push_back(Matrix::Zero(e.value->rows(), e.value->cols()));
    s.second.push_back(Matrix::Zero(e.value->rows(), e.value->cols()));
  }
  return s;
}

void adam_step(AdamState& state, ModelParams& params, const ModelParams& grads, double lr) {
  auto entries = params.entries();
  const auto grad_entries = grads.entries();
  if (entries.size() != state.first.size() || grad_entries.size() != entries.size())
    throw ValidationError("adam: parameter layout changed");
  ++state.step;
  const auto& h = state.hyper;
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Matrix& theta = *entries[i].value;
    const Matrix& g0 = *grad_entries[i].value;
    if (g0.rows() != theta.rows() || g0.cols() != theta.cols()) throw ValidationError("adam: gradient shape mismatch");
    const double decay = entries[i].is_bias ? 0.0 : h.weight_decay;
    Matrix& m = state.first[i];
    Matrix& v = state.second[i];
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double g = g0.data()[k] + decay * theta.data()[k];
      m.data()[k] = h.beta1 * m.data()[k] + (1.0 - h.beta1) * g;
      v.data()[k] = h.beta2 * v.data()[k] + (1.0 - h.beta2) * g * g;
      const double m_hat = m.data()[k] / bc1;
      const double v_hat = v.data()[k] / bc2;
      theta.data()[k] -= lr * m_hat / (std::sqrt(v_hat) + h.eps);
    }
  }
}

double PlateauScheduler::step(double metric) {
  if (metric > best_) {
    best_ = metric;
    bad_epochs_ = 0;
  } else if (++bad_epochs_ > config_.patience) {
    lr_ = std::max(lr_ * config_.factor, config_.min_lr);
    bad_epochs_ = 0;
  }
  return lr_;
}

void TrainConfig::validate() const {
  model.validate();
  if (!(lr > 0.0)) throw ValidationError("train: lr must be > 0");
  if (!(weight_decay >= 0.0)) throw ValidationError("train: weight decay must be >= 0");
  if (!(plateau.factor > 0.0 && plateau.factor < 1.0)) throw ValidationError("train: plateau factor must be in (0,1)");
  if (!(plateau.min_lr > 0.0 && plateau.min_lr <= lr)) throw ValidationError("train: need 0 < min_lr <= lr");
}

Matrix predict_proba(const ModelGraph& graph, const FeatureMatrix& features, const ModelParams& params,
                     const ModelConfig& config, std::span<const std::size_t> rows) {
  const ForwardPass pass = model_forward(graph, features, params, config, nullptr);
  Matrix logits = decoder_forward(params.decoder, gather_rows(pass.output(), rows), 0.0);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double shift = logits.row(i).maxCoeff();
    logits.row(i) = (logits.row(i).array() - shift).exp().matrix();
    logits.row(i) /= logits.row(i).sum();
  }
  return logits;
}

EvalReport evaluate(const SnapshotSequence& seq, const ModelGraph& graph, const ModelParams& params,
                    const ModelConfig& config, std::span<const std::size_t> rows, AucPooling pooling) {
  const Matrix probs = predict_proba(graph, seq.features, params, config, rows);
  std::vector<std::size_t> steps;
  steps.reserve(rows.size());
  for (std::size_t k : rows) steps.push_back(k / seq.n_nodes);
  return macro_auc(probs, targets_of(seq.labels, rows), steps, pooling);
}

FitResult fit(const SnapshotSequence& seq, const Split& split, const TrainConfig& config) {
  config.validate();
  seq.validate();
  FitResult result;
  result.weights = class_weights(seq.labels, split.train, seq.n_classes, &result.warnings);

  std::seed_seq seeds{config.seed, std::uint64_t{0x7e3a}};
  std::uint64_t init_seed = 0, dropout_seed = 0;
  {
    std::array<std::uint32_t, 4> raw{};
    seeds.generate(raw.begin(), raw.end());
    init_seed = (std::uint64_t{raw[0]} << 32) | raw[1];
    dropout_seed = (std::uint64_t{raw[2]} << 32) | raw[3];
  }
  std::mt19937_64 dropout_rng(dropout_seed);

  const ModelGraph graph = prepare_graph(seq, config.model);
  ModelParams params = init_params(config.model, seq.features.dim, seq.n_classes, init_seed);
  result.best_params = params;
  if (config.epochs == 0) return result;

  AdamState adam = AdamState::init(params, AdamConfig{.weight_decay = config.weight_decay});
  PlateauScheduler scheduler(config.lr, config.plateau);
  const Objective objective{graph, seq.features, seq.labels, split.train, result.weights, config.model};
  std::optional<double> best_auc;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const double lr = scheduler.lr();
    LossAndGradient step;
    try {
      step = backward(objective, params, &dropout_rng);
    } catch (const TrainingDiverged& e) {
      throw TrainingDiverged("epoch " + std::to_string(epoch) + ": " + e.what());
    }
    if (!std::isfinite(step.loss)) throw TrainingDiverged("epoch " + std::to_string(epoch) + ": loss is not finite");
    adam_step(adam, params, step.grads, lr);

    const EvalReport val = evaluate(seq, graph, params, config.model, split.val, config.pooling);
    result.history.push_back({epoch, step.loss, val.macro_auc, lr});
    if (!best_auc || val.macro_auc > *best_auc) {
      best_auc = val.macro_auc;
      result.best_params = params;
      result.best_epoch = epoch;
    }
    scheduler.step(val.macro_auc);
  }
  return result;
}

void write_history_csv(const std::vector<EpochRecord>& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "epoch,train_loss,val_macro_auc,lr\n";
  for (const auto& r : history) out << r.epoch << ',' << r.train_loss << ',' << r.val_macro_auc << ',' << r.lr << '\n';
}

double gradient_rel_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-3});
}

namespace {

struct Instance {
  SnapshotSequence seq;
  std::vector<std::size_t> train;
  ClassWeights weights;
  ModelConfig config;
  ModelGraph graph;
  ModelParams params;
};

Instance make_instance(const GradCheckConfig& gc, std::uint64_t seed) {
  DsbmParams dp{gc.n_nodes, gc.n_steps, gc.n_blocks, 0.5, 0.15, 0.2, seed};
  Instance inst{synth_dsbm(dp), {}, {}, {}, {}, {}};
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  if (gc.explicit_features || gc.positive_regime) {
    const auto rows = static_cast<Eigen::Index>(gc.n_nodes * gc.n_steps);
    const Eigen::Index dim = 5;
    std::uniform_real_distribution<double> pos(0.1, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(rows, dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = gc.positive_regime ? pos(rng) : normal(rng);
    inst.seq.features = FeatureMatrix::explicit_rows(gc.n_nodes, gc.n_steps, std::move(x));
  }
  inst.train.resize(gc.n_nodes * gc.n_steps);
  std::iota(inst.train.begin(), inst.train.end(), 0);
  inst.weights = class_weights(inst.seq.labels, inst.train, inst.seq.n_classes);

  ModelConfig& mc = inst.config;
  mc.realization = gc.realization;
  mc.tie_embedding = gc.tie_embedding;
  mc.decoder_dropout = gc.decoder_dropout;
  mc.propagation.n_layers = gc.n_layers;
  mc.propagation.hidden_dim = gc.hidden_dim;
  mc.propagation.variant = gc.variant;
  mc.propagation.skip = gc.skip;
  mc.propagation.dropout = gc.dropout;
  mc.propagation.alpha = 0.3;
  mc.propagation.lambda = 0.5;
  inst.graph = prepare_graph(inst.seq, mc);
  inst.params = init_params(mc, inst.seq.features.dim, inst.seq.n_classes, seed + 17);
  // Inflate the ReLU and LeakyReLU inputs while keeping attention scores and
  // logits at their usual size: projections grow, the vectors reading them shrink.
  const double scale = gc.positive_regime ? 1.0 : gc.param_scale;
  for (auto& a : inst.params.attention) {
    a.theta_l *= scale;
    a.theta_r *= scale;
    a.att /= scale;
  }
  inst.params.embedding *= scale;
  inst.params.decoder.w2 /= scale;
  if (gc.positive_regime) {
    for (auto& e : inst.params.entries()) *e.value = e.value->cwiseAbs();
    for (auto& e : inst.params.entries())
      if (e.is_bias) e.value->setConstant(0.05);
  } else {
    std::uniform_real_distribution<double> bias(-0.2, 0.2);
    for (auto& e : inst.params.entries())
      if (e.is_bias)
        for (Eigen::Index k = 0; k < e.value->size(); ++k) e.value->data()[k] = bias(rng);
  }
  return inst;
}

// Smallest distance of any ReLU / LeakyReLU input from its kink.
double kink_distance(const Instance& inst, std::uint64_t dropout_seed) {
  std::mt19937_64 rng(dropout_seed);
  const ForwardPass pass = model_forward(inst.graph, inst.seq.features, inst.params, inst.config, &rng);
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < pass.stacks.size(); ++s) {
    const StackState& st = pass.stacks[s];
    for (const auto& layer : st.tape.layers) {
      for (Eigen::Index r = 0; r < layer.pre.rows(); ++r) {
        // A row that is exactly zero came from all-zero inputs and stays zero
        // under small perturbations, so it has no kink to cross.
        if (layer.pre.row(r).isZero(0.0)) continue;
        closest = std::min(closest, layer.pre.row(r).cwiseAbs().minCoeff());
      }
    }
    if (inst.config.adaptive_transition) {
      const SparseCsr& in = *inst.graph.incoming[s];
      for (std::size_t v = 0; v < in.n_rows; ++v)
        for (std::size_t k = in.row_offsets[v]; k < in.row_offsets[v + 1]; ++k)
          closest = std::min(closest, (st.proj_src.row(static_cast<Eigen::Index>(in.col_indices[k])) +
                                       st.proj_dst.row(static_cast<Eigen::Index>(v)))
                                          .cwiseAbs()
                                          .minCoeff());
    }
  }
  DecoderTape tape;
  decoder_forward(inst.params.decoder, gather_rows(pass.output(), inst.train), inst.config.decoder_dropout, &rng,
                  &tape);
  return std::min(closest, tape.hidden_pre.cwiseAbs().minCoeff());
}

}  // namespace

GradCheckResult gradient_check(const GradCheckConfig& gc) {
  if (gc.n_blocks > gc.n_nodes) throw ValidationError("gradcheck: n_blocks > n_nodes");
  GradCheckResult result;
  std::optional<Instance> chosen;
  const std::uint64_t dropout_seed = gc.seed * 7919 + 3;
  for (std::size_t attempt = 0; attempt < gc.max_attempts && !chosen; ++attempt) {
    Instance inst = make_instance(gc, gc.seed * 1000003 + attempt);
    const double d = kink_distance(inst, dropout_seed);
    result.attempts = attempt + 1;
    result.kink_distance = std::max(result.kink_distance, d);
    if (d >= gc.kink_margin) {
      result.kink_distance = d;
      chosen = std::move(inst);
    }
  }
  if (!chosen) {
    std::ostringstream msg;
    msg << "gradcheck: none of " << result.attempts << " instances cleared the kink margin " << gc.kink_margin
        << " (best " << result.kink_distance << ")";
    throw std::runtime_error(msg.str());
  }
  Instance& inst = *chosen;
  const Objective obj{inst.graph, inst.seq.features, inst.seq.labels, inst.train, inst.weights, inst.config};

  std::mt19937_64 rng(dropout_seed);
  const LossAndGradient analytic = backward(obj, inst.params, &rng);
  const auto grad_entries = analytic.grads.entries();
  auto entries = inst.params.entries();

  std::mt19937_64 pick(gc.seed);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Matrix& theta = *entries[i].value;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(theta.size()));
    std::iota(idx.begin(), idx.end(), 0);
    if (idx.size() > gc.max_entries_per_tensor) {
      std::shuffle(idx.begin(), idx.end(), pick);
      idx.resize(gc.max_entries_per_tensor);
    }
    for (Eigen::Index k : idx) {
      const double saved = theta.data()[k];
      theta.data()[k] = saved + gc.step;
      std::mt19937_64 rp(dropout_seed);
      const double plus = objective_value(obj, inst.params, &rp);
      theta.data()[k] = saved - gc.step;
      std::mt19937_64 rm(dropout_seed);
      const double minus = objective_value(obj, inst.params, &rm);
      theta.data()[k] = saved;
      const double numeric = (plus - minus) / (2.0 * gc.step);
      const double err = gradient_rel_error(grad_entries[i].value->data()[k], numeric);
      ++result.n_checked;
      if (err >= result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_entry = entries[i].name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return result;
}

}  // namespace tempaug
