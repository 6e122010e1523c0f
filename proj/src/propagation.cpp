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

#include "tempaug/propagation.hpp"

#include <algorithm>
#include <string>

namespace tempaug {

double PropagationConfig::beta(std::size_t layer) const {
  return std::min(1.0, lambda / static_cast<double>(layer));
}

void PropagationConfig::validate() const {
  if (n_layers == 0) throw ValidationError("propagation: need at least one layer");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("propagation: alpha must be in [0,1]");
  if (!(lambda >= 0.0)) throw ValidationError("propagation: lambda must be >= 0");
  if (hidden_dim == 0) throw ValidationError("propagation: hidden_dim must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("propagation: dropout must be in [0,1)");
}

std::size_t PropagationParams::n_parameters() const {
  std::size_t n = 0;
  for (const auto& w : w1) n += static_cast<std::size_t>(w.size());
  for (const auto& w : w2) n += static_cast<std::size_t>(w.size());
  return n;
}

Matrix initial_embedding(const FeatureMatrix& features, const Matrix& theta_r) { return project(features, theta_r); }

Matrix propagate(const TransitionMatrix& tm, const Matrix& h) {
  const auto& p = *tm.pattern;
  if (static_cast<std::size_t>(h.rows()) != p.n_cols) throw ValidationError("propagate: row count mismatch");
  const auto f = h.cols();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(p.n_rows), f);
  for (std::size_t v = 0; v < p.n_rows; ++v) {
    double* o = out.row(static_cast<Eigen::Index>(v)).data();
    for (std::size_t k = p.row_offsets[v]; k < p.row_offsets[v + 1]; ++k) {
      const double a = tm.alpha[k];
      const double* src = h.row(static_cast<Eigen::Index>(p.col_indices[k])).data();
      for (Eigen::Index c = 0; c < f; ++c) o[c] += a * src[c];
    }
  }
  return out;
}

Matrix propagate_transpose(const TransitionMatrix& tm, const Matrix& g) {
  const auto& p = *tm.pattern;
  const auto f = g.cols();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(p.n_cols), f);
  for (std::size_t v = 0; v < p.n_rows; ++v) {
    const double* src = g.row(static_cast<Eigen::Index>(v)).data();
    for (std::size_t k = p.row_offsets[v]; k < p.row_offsets[v + 1]; ++k) {
      const double a = tm.alpha[k];
      double* o = out.row(static_cast<Eigen::Index>(p.col_indices[k])).data();
      for (Eigen::Index c = 0; c < f; ++c) o[c] += a * src[c];
    }
  }
  return out;
}

namespace {

Matrix mixing(const Matrix& w, double beta) {
  if (w.rows() != w.cols()) throw ValidationError("propagation: layer weight must be square");
  Matrix m = beta * w;
  m.diagonal().array() += 1.0 - beta;
  return m;
}

void check_shapes(const Matrix& h, const Matrix& h0, const TransitionMatrix& tm, const Matrix& w) {
  if (h.rows() != h0.rows() || h.cols() != h0.cols())
    throw ValidationError("propagation: H and H0 shapes differ");
  if (static_cast<std::size_t>(h.rows()) != tm.n_rows())
    throw ValidationError("propagation: embedding rows != transition size");
  if (w.rows() != h.cols()) throw ValidationError("propagation: weight size != hidden dim");
}

// Pre-activation of one layer, filling tape fields as a side effect.
Matrix layer_pre(const Matrix& h, const Matrix& h0, const TransitionMatrix& tm, const Matrix& w1, const Matrix* w2,
                 double alpha, double beta, bool skip, LayerTape& tape) {
  check_shapes(h, h0, tm, w1);
  tape.aggregated = propagate(tm, h);
  Matrix pre;
  if (w2 == nullptr) {
    tape.mixed = (1.0 - alpha) * tape.aggregated + alpha * h0;
    pre = tape.mixed * mixing(w1, beta);
  } else {
    pre = ((1.0 - alpha) * tape.aggregated) * mixing(w1, beta) + (alpha * h0) * mixing(*w2, beta);
  }
  if (skip) pre += h;
  return pre;
}

}  // namespace

Matrix layer_forward(const Matrix& h, const Matrix& h0, const TransitionMatrix& tm, const Matrix& w, double alpha,
                     double beta, bool skip) {
  LayerTape scratch;
  return layer_pre(h, h0, tm, w, nullptr, alpha, beta, skip, scratch).cwiseMax(0.0);
}

Matrix layer_forward_variant(const Matrix& h, const Matrix& h0, const TransitionMatrix& tm, const Matrix& w1,
                             const Matrix& w2, double alpha, double beta, bool skip) {
  LayerTape scratch;
  return layer_pre(h, h0, tm, w1, &w2, alpha, beta, skip, scratch).cwiseMax(0.0);
}

std::size_t StackTape::largest_buffer() const {
  std::size_t largest = 0;
  for (const auto& l : layers)
    for (const Matrix* m : {&l.input, &l.mask, &l.aggregated, &l.mixed, &l.pre})
      largest = std::max(largest, static_cast<std::size_t>(m->size()));
  return largest;
}

Matrix run_stack(const TransitionMatrix& tm, const Matrix& h0, const PropagationParams& params,
                 const PropagationConfig& config, std::mt19937_64* dropout_rng, StackTape* tape) {
  config.validate();
  if (params.w1.size() != config.n_layers || (config.variant && params.w2.size() != config.n_layers))
    throw ValidationError("propagation: parameter stack does not match layer count");
  const bool drop = dropout_rng != nullptr && config.dropout > 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double keep_scale = 1.0 / (1.0 - config.dropout);

  if (tape != nullptr) tape->layers.assign(config.n_layers, {});
  Matrix h = h0;
  for (std::size_t l = 0; l < config.n_layers; ++l) {
    LayerTape local;
    LayerTape& lt = tape != nullptr ? tape->layers[l] : local;
    if (drop) {
      lt.mask.resize(h.rows(), h.cols());
      for (Eigen::Index i = 0; i < lt.mask.size(); ++i)
        lt.mask.data()[i] = unit(*dropout_rng) < config.dropout ? 0.0 : keep_scale;
      lt.input = h.cwiseProduct(lt.mask);
    } else {
      lt.input = h;
    }
    const Matrix* w2 = config.variant ? &params.w2[l] : nullptr;
    lt.pre = layer_pre(lt.input, h0, tm, params.w1[l], w2, config.alpha, config.beta(l + 1), false, lt);
    if (config.skip) lt.pre += h;
    h = lt.pre.cwiseMax(0.0);
  }
  return h;
}

StackGrads run_stack_backward(const TransitionMatrix& tm, const Matrix& h0, const PropagationParams& params,
                              const PropagationConfig& config, const StackTape& tape, const Matrix& d_out) {
  const std::size_t n_layers = config.n_layers;
  if (tape.layers.size() != n_layers) throw std::logic_error("propagation backward: missing cached activations");
  StackGrads g;
  g.d_params.w1.resize(n_layers);
  if (config.variant) g.d_params.w2.resize(n_layers);
  g.d_h0 = Matrix::Zero(h0.rows(), h0.cols());
  g.d_alpha.assign(tm.alpha.size(), 0.0);
  const auto& p = *tm.pattern;
  const auto f = h0.cols();

  Matrix d_h = d_out;
  for (std::size_t l = n_layers; l-- > 0;) {
    const LayerTape& lt = tape.layers[l];
    const double alpha = config.alpha;
    const double beta = config.beta(l + 1);
    const Matrix d_pre = d_h.cwiseProduct((lt.pre.array() > 0.0).cast<double>().matrix());

    Matrix d_aggregated;
    if (!config.variant) {
      g.d_params.w1[l] = beta * (lt.mixed.transpose() * d_pre);
      const Matrix d_mixed = d_pre * mixing(params.w1[l], beta).transpose();
      d_aggregated = (1.0 - alpha) * d_mixed;
      g.d_h0 += alpha * d_mixed;
    } else {
      const Matrix scaled_agg = (1.0 - alpha) * lt.aggregated;
      g.d_params.w1[l] = beta * (scaled_agg.transpose() * d_pre);
      g.d_params.w2[l] = beta * ((alpha * h0).transpose() * d_pre);
      d_aggregated = (1.0 - alpha) * (d_pre * mixing(params.w1[l], beta).transpose());
      g.d_h0 += alpha * (d_pre * mixing(params.w2[l], beta).transpose());
    }

    // aggregated = A_hat * input: gradients to alpha and to the input rows.
    for (std::size_t v = 0; v < p.n_rows; ++v) {
      const double* dv = d_aggregated.row(static_cast<Eigen::Index>(v)).data();
      for (std::size_t k = p.row_offsets[v]; k < p.row_offsets[v + 1]; ++k) {
        const double* src = lt.input.row(static_cast<Eigen::Index>(p.col_indices[k])).data();
        double dot = 0.0;
        for (Eigen::Index c = 0; c < f; ++c) dot += dv[c] * src[c];
        g.d_alpha[k] += dot;
      }
    }
    Matrix d_input = propagate_transpose(tm, d_aggregated);
    if (lt.mask.size() > 0) d_input = d_input.cwiseProduct(lt.mask);
    if (config.skip) d_input += d_pre;
    d_h = std::move(d_input);
  }
  g.d_h0 += d_h;  // layer 0 input is H0 itself
  return g;
}

Matrix forward(std::shared_ptr<const SparseCsr> incoming, const FeatureMatrix& features,
               const AttentionParams& attention, const PropagationParams& params, const PropagationConfig& config,
               std::mt19937_64* dropout_rng) {
  const TransitionMatrix tm = adaptive_transition(std::move(incoming), features, attention);
  return run_stack(tm, initial_embedding(features, attention.theta_r), params, config, dropout_rng);
}

Matrix forward_disentangled(std::shared_ptr<const SparseCsr> structural, std::shared_ptr<const SparseCsr> temporal,
                            const FeatureMatrix& features, const AttentionParams& attention_s,
                            const AttentionParams& attention_t, const PropagationParams& params_s,
                            const PropagationParams& params_t, const PropagationConfig& config,
                            std::mt19937_64* dropout_rng) {
  const TransitionMatrix tm_s = adaptive_transition(std::move(structural), features, attention_s);
  const TransitionMatrix tm_t = adaptive_transition(std::move(temporal), features, attention_t);
  const Matrix h_s = run_stack(tm_s, initial_embedding(features, attention_s.theta_r), params_s, config, dropout_rng);
  return run_stack(tm_t, h_s, params_t, config, dropout_rng);
}

}  // namespace tempaug
