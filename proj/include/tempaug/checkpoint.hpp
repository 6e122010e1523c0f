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

#include <filesystem>

#include <json.hpp>

#include "tempaug/training.hpp"

namespace tempaug {

inline constexpr int kCheckpointVersion = 1;

/// Flat key/value form of a TrainConfig; every field is written.
nlohmann::json to_json(const TrainConfig& config);

/// Reads the TrainConfig keys present in `j` on top of `base`. Keys not in
/// `allowed_extra` and not TrainConfig fields are rejected.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {},
                                   const std::vector<std::string>& allowed_extra = {});

/// Names of every TrainConfig key.
const std::vector<std::string>& train_config_keys();

nlohmann::json to_json(const ModelParams& params);
/// Fills tensors of `shape` by name; shapes must match exactly.
void params_from_json(const nlohmann::json& j, ModelParams& shape);

struct Checkpoint {
  TrainConfig config;
  ModelParams params;
  std::size_t feature_dim = 0;
  std::size_t n_classes = 0;
  std::optional<std::size_t> best_epoch;
  nlohmann::json data;  // description of the training data source
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tempaug
