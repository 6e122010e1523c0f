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

#include "tempaug/model.hpp"

#include <algorithm>
#include <cmath>

namespace tempaug {

void ModelConfig::validate() const {
  propagation.validate();
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) throw ValidationError("model: leaky slope must be in (0,1)");
  if (!(decoder_dropout >= 0.0 && decoder_dropout < 1.0))
    throw ValidationError("model: decoder dropout must be in [0,1)");
}

std::vector<ModelParams::Entry> ModelParams::entries() {
  std::vector<Entry> out;
  for (std::size_t s = 0; s < attention.size(); ++s) {
    const std::string p = "attention" + std::to_string(s) + ".";
    out.push_back({p + "theta_l", &attention[s].theta_l, false});
    out.push_back({p + "theta_r", &attention[s].theta_r, false});
    out.push_back({p + "att", &attention[s].att, false});
  }
  if (embedding.size() > 0) out.push_back({"embedding", &embedding, false});
  for (std::size_t s = 0; s < stacks.size(); ++s) {
    const std::string p = "stack" + std::to_string(s) + ".";
    for (std::size_t l = 0; l < stacks[s].w1.size(); ++l)
      out.push_back({p + "w1." + std::to_string(l), &stacks[s].w1[l], false});
    for (std::size_t l = 0; l < stacks[s].w2.size(); ++l)
      out.push_back({p + "w2." + std::to_string(l), &stacks[s].w2[l], false});
  }
  out.push_back({"decoder.w1", &decoder.w1, false});
  out.push_back({"decoder.b1", &decoder.b1, true});
  out.push_back({"decoder.w2", &decoder.w2, false});
  out.push_back({"decoder.b2", &decoder.b2, true});
  return out;
}

std::vector<ModelParams::ConstEntry> ModelParams::entries() const {
  std::vector<ConstEntry> out;
  for (auto& e : const_cast<ModelParams*>(this)->entries()) out.push_back({e.name, e.value, e.is_bias});
  return out;
}

std::size_t ModelParams::n_parameters() const {
  std::size_t n = 0;
  for (const auto& e : entries()) n += static_cast<std::size_t>(e.value->size());
  return n;
}

std::size_t ModelParams::n_propagation_parameters() const {
  std::size_t n = 0;
  for (const auto& s : stacks) n += s.n_parameters();
  return n;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (auto& e : z.entries()) e.value->setZero();
  return z;
}

namespace {

Matrix glorot(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

}  // namespace

ModelParams init_params(const ModelConfig& config, std::size_t feature_dim, std::size_t n_classes,
                        std::uint64_t seed) {
  config.validate();
  if (n_classes < 2) throw ValidationError("model: need at least two classes");
  std::mt19937_64 rng(seed);
  const auto f = static_cast<Eigen::Index>(config.propagation.hidden_dim);
  const auto d = static_cast<Eigen::Index>(feature_dim);
  ModelParams p;
  for (std::size_t s = 0; s < config.n_stacks(); ++s) {
    AttentionParams a;
    a.theta_l = glorot(f, d, rng);
    a.theta_r = glorot(f, d, rng);
    a.att = glorot(f, 1, rng);
    a.leaky_slope = config.leaky_slope;
    p.attention.push_back(std::move(a));
  }
  if (!config.tie_embedding) p.embedding = glorot(f, d, rng);
  for (std::size_t s = 0; s < config.n_stacks(); ++s) {
    PropagationParams stack;
    for (std::size_t l = 0; l < config.propagation.n_layers; ++l) {
      stack.w1.push_back(glorot(f, f, rng));
      if (config.propagation.variant) stack.w2.push_back(glorot(f, f, rng));
    }
    p.stacks.push_back(std::move(stack));
  }
  const auto c = static_cast<Eigen::Index>(n_classes);
  p.decoder.w1 = glorot(f, f, rng);
  p.decoder.b1 = Matrix::Zero(1, f);
  p.decoder.w2 = glorot(c, f, rng);
  p.decoder.b2 = Matrix::Zero(1, c);
  return p;
}

ModelGraph prepare_graph(const SnapshotSequence& seq, const ModelConfig& config) {
  ModelGraph g;
  if (!config.time_augmentation) {
    g.incoming.push_back(std::make_shared<const SparseCsr>(build_static(seq).incoming()));
    return g;
  }
  const auto augmented = build_augmented(seq, config.realization);
  for (const auto& part : augmented.parts) g.incoming.push_back(std::make_shared<const SparseCsr>(part.incoming()));
  return g;
}

std::size_t ForwardPass::largest_buffer() const {
  std::size_t largest = 0;
  for (const auto& s : stacks) {
    largest = std::max(largest, s.tape.largest_buffer());
    for (const Matrix* m : {&s.proj_src, &s.proj_dst, &s.h0, &s.output})
      largest = std::max(largest, static_cast<std::size_t>(m->size()));
  }
  return largest;
}

ForwardPass model_forward(const ModelGraph& graph, const FeatureMatrix& features, const ModelParams& params,
                          const ModelConfig& config, std::mt19937_64* dropout_rng) {
  if (graph.incoming.size() != config.n_stacks() || params.stacks.size() != config.n_stacks() ||
      params.attention.size() != config.n_stacks())
    throw ValidationError("model: graph/parameter stack count does not match configuration");
  ForwardPass pass;
  pass.stacks.resize(config.n_stacks());
  for (std::size_t s = 0; s < config.n_stacks(); ++s) {
    StackState& st = pass.stacks[s];
    const AttentionParams& attn = params.attention[s];
    attn.validate(features.dim);
    if (config.adaptive_transition) {
      st.proj_src = project(features, attn.theta_l);
      st.proj_dst = project(features, attn.theta_r);
      const auto scores = edge_scores(*graph.incoming[s], st.proj_src, st.proj_dst, attn.att, attn.leaky_slope);
      st.transition = edge_softmax_transition(graph.incoming[s], scores);
    } else {
      st.transition = uniform_transition(graph.incoming[s]);
    }
    if (s == 0) {
      st.h0 = (config.adaptive_transition && config.tie_embedding) ? st.proj_dst
                                                                   : initial_embedding(features, params.embedding_theta());
    } else {
      st.h0 = pass.stacks[s - 1].output;
    }
    st.output = run_stack(st.transition, st.h0, params.stacks[s], config.propagation, dropout_rng, &st.tape);
  }
  return pass;
}

ModelParams model_backward(const ModelGraph& graph, const FeatureMatrix& features, const ModelParams& params,
                           const ModelConfig& config, const ForwardPass& pass, const Matrix& d_output) {
  ModelParams grads = params.zeros_like();
  Matrix d_out = d_output;
  for (std::size_t s = config.n_stacks(); s-- > 0;) {
    const StackState& st = pass.stacks[s];
    StackGrads sg = run_stack_backward(st.transition, st.h0, params.stacks[s], config.propagation, st.tape, d_out);
    grads.stacks[s] = std::move(sg.d_params);
    if (config.adaptive_transition) {
      const AttentionParams& attn = params.attention[s];
      const auto d_scores = edge_softmax_backward(st.transition, sg.d_alpha);
      ScoreGrads g = edge_scores_backward(*graph.incoming[s], st.proj_src, st.proj_dst, attn.att, attn.leaky_slope,
                                          d_scores);
      grads.attention[s].theta_l += project_backward(features, g.d_proj_src);
      grads.attention[s].theta_r += project_backward(features, g.d_proj_dst);
      grads.attention[s].att += g.d_att;
    }
    if (s == 0) {
      // Tied: H0 = theta_r x, so this sums with the attention path.
      Matrix& target = params.embedding.size() > 0 ? grads.embedding : grads.attention[0].theta_r;
      target += project_backward(features, sg.d_h0);
    } else {
      d_out = std::move(sg.d_h0);
    }
  }
  return grads;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Matrix decoder_forward(const DecoderParams& dec, const Matrix& input, double dropout, std::mt19937_64* dropout_rng,
                       DecoderTape* tape) {
  if (input.cols() != dec.w1.cols()) throw ValidationError("decoder: input width != hidden dim");
  DecoderTape local;
  DecoderTape& t = tape != nullptr ? *tape : local;
  t.input = input;
  t.hidden_pre = input * dec.w1.transpose();
  t.hidden_pre.rowwise() += dec.b1.row(0);
  t.hidden = t.hidden_pre.cwiseMax(0.0);
  t.mask.resize(0, 0);
  if (dropout_rng != nullptr && dropout > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - dropout);
    t.mask.resize(t.hidden.rows(), t.hidden.cols());
    for (Eigen::Index i = 0; i < t.mask.size(); ++i)
      t.mask.data()[i] = unit(*dropout_rng) < dropout ? 0.0 : keep_scale;
    t.hidden = t.hidden.cwiseProduct(t.mask);
  }
  Matrix logits = t.hidden * dec.w2.transpose();
  logits.rowwise() += dec.b2.row(0);
  return logits;
}

Matrix decoder_backward(const DecoderParams& dec, const DecoderTape& t, const Matrix& d_logits, DecoderParams& grads) {
  grads.w2 += d_logits.transpose() * t.hidden;
  grads.b2 += d_logits.colwise().sum();
  Matrix d_hidden = d_logits * dec.w2;
  if (t.mask.size() > 0) d_hidden = d_hidden.cwiseProduct(t.mask);
  const Matrix d_pre = d_hidden.cwiseProduct((t.hidden_pre.array() > 0.0).cast<double>().matrix());
  grads.w1 += d_pre.transpose() * t.input;
  grads.b1 += d_pre.colwise().sum();
  return d_pre * dec.w1;
}

}  // namespace tempaug
