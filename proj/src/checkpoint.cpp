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

#include "tempaug/checkpoint.hpp"

#include <algorithm>
#include <fstream>

namespace tempaug {

using nlohmann::json;

const std::vector<std::string>& train_config_keys() {
  static const std::vector<std::string> keys{
      "realization", "time_augmentation", "adaptive_transition", "tie_embedding", "layers", "dim", "alpha",
      "lambda", "variant", "skip", "dropout", "decoder_dropout", "leaky_slope", "epochs", "lr", "wd",
      "plateau_factor", "plateau_patience", "min_lr", "seed", "pooling"};
  return keys;
}

json to_json(const TrainConfig& c) {
  const auto& m = c.model;
  const auto& p = m.propagation;
  return json{{"realization", to_string(m.realization)},
              {"time_augmentation", m.time_augmentation},
              {"adaptive_transition", m.adaptive_transition},
              {"tie_embedding", m.tie_embedding},
              {"layers", p.n_layers},
              {"dim", p.hidden_dim},
              {"alpha", p.alpha},
              {"lambda", p.lambda},
              {"variant", p.variant},
              {"skip", p.skip},
              {"dropout", p.dropout},
              {"decoder_dropout", m.decoder_dropout},
              {"leaky_slope", m.leaky_slope},
              {"epochs", c.epochs},
              {"lr", c.lr},
              {"wd", c.weight_decay},
              {"plateau_factor", c.plateau.factor},
              {"plateau_patience", c.plateau.patience},
              {"min_lr", c.plateau.min_lr},
              {"seed", c.seed},
              {"pooling", c.pooling == AucPooling::Pooled ? "pooled" : "per_step"}};
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

TrainConfig train_config_from_json(const json& j, TrainConfig c, const std::vector<std::string>& allowed_extra) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  const auto& keys = train_config_keys();
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end() &&
        std::find(allowed_extra.begin(), allowed_extra.end(), key) == allowed_extra.end())
      throw ValidationError("config: unknown key '" + key + "'");
  }
  auto& m = c.model;
  auto& p = m.propagation;
  if (j.contains("realization")) {
    std::string r;
    read(j, "realization", r);
    m.realization = parse_realization(r);
  }
  read(j, "time_augmentation", m.time_augmentation);
  read(j, "adaptive_transition", m.adaptive_transition);
  read(j, "tie_embedding", m.tie_embedding);
  read(j, "layers", p.n_layers);
  read(j, "dim", p.hidden_dim);
  read(j, "alpha", p.alpha);
  read(j, "lambda", p.lambda);
  read(j, "variant", p.variant);
  read(j, "skip", p.skip);
  read(j, "dropout", p.dropout);
  read(j, "decoder_dropout", m.decoder_dropout);
  read(j, "leaky_slope", m.leaky_slope);
  read(j, "epochs", c.epochs);
  read(j, "lr", c.lr);
  read(j, "wd", c.weight_decay);
  read(j, "plateau_factor", c.plateau.factor);
  read(j, "plateau_patience", c.plateau.patience);
  read(j, "min_lr", c.plateau.min_lr);
  read(j, "seed", c.seed);
  if (j.contains("pooling")) {
    std::string pooling;
    read(j, "pooling", pooling);
    if (pooling == "pooled") c.pooling = AucPooling::Pooled;
    else if (pooling == "per_step") c.pooling = AucPooling::PerStep;
    else throw ValidationError("config: pooling must be 'pooled' or 'per_step'");
  }
  c.validate();
  return c;
}

json to_json(const ModelParams& params) {
  json out = json::object();
  for (const auto& e : params.entries()) {
    const Matrix& m = *e.value;
    out[e.name] = json{{"rows", m.rows()}, {"cols", m.cols()},
                       {"data", std::vector<double>(m.data(), m.data() + m.size())}};
  }
  return out;
}

void params_from_json(const json& j, ModelParams& shape) {
  for (auto& e : shape.entries()) {
    if (!j.contains(e.name)) throw ValidationError("checkpoint: missing tensor '" + e.name + "'");
    const json& t = j.at(e.name);
    const auto rows = t.at("rows").get<Eigen::Index>();
    const auto cols = t.at("cols").get<Eigen::Index>();
    const auto data = t.at("data").get<std::vector<double>>();
    if (rows != e.value->rows() || cols != e.value->cols() || static_cast<Eigen::Index>(data.size()) != rows * cols)
      throw ValidationError("checkpoint: tensor '" + e.name + "' has the wrong shape");
    std::copy(data.begin(), data.end(), e.value->data());
  }
  if (j.size() != shape.entries().size()) throw ValidationError("checkpoint: unexpected extra tensors");
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  json j{{"version", kCheckpointVersion},
         {"config", to_json(ck.config)},
         {"seed", ck.config.seed},
         {"feature_dim", ck.feature_dim},
         {"n_classes", ck.n_classes},
         {"best_epoch", ck.best_epoch ? json(*ck.best_epoch) : json(nullptr)},
         {"data", ck.data},
         {"params", to_json(ck.params)}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("checkpoint: " + std::string(e.what()));
  }
  if (j.value("version", 0) != kCheckpointVersion) throw ValidationError("checkpoint: unsupported version");
  Checkpoint ck;
  ck.config = train_config_from_json(j.at("config"));
  ck.feature_dim = j.at("feature_dim").get<std::size_t>();
  ck.n_classes = j.at("n_classes").get<std::size_t>();
  if (!j.at("best_epoch").is_null()) ck.best_epoch = j.at("best_epoch").get<std::size_t>();
  ck.data = j.value("data", json::object());
  ck.params = init_params(ck.config.model, ck.feature_dim, ck.n_classes, 0);
  params_from_json(j.at("params"), ck.params);
  return ck;
}

}  // namespace tempaug
