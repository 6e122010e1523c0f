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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempaug/common.hpp"

namespace tempaug {

/// Mann-Whitney AUC with average ranks for ties. nullopt when `labels` holds
/// only one class.
std::optional<double> binary_auc(std::span<const double> scores, std::span<const int> labels);

enum class AucPooling {
  Pooled,   // one AUC per class over all evaluation node-times
  PerStep,  // one AUC per (class, step), averaged over steps first
};

struct EvalReport {
  double macro_auc = 0.0;
  std::vector<std::optional<double>> per_class_auc;
  std::size_t n_examples = 0;
  AucPooling pooling = AucPooling::Pooled;
  Warnings warnings;
};

/// One-vs-rest AUC per class using column c of `probabilities` (one row per
/// example), averaged over the classes whose AUC is defined. `steps` is only
/// consulted for PerStep pooling.
EvalReport macro_auc(const Matrix& probabilities, std::span<const int> labels, std::span<const std::size_t> steps = {},
                     AucPooling pooling = AucPooling::Pooled);

std::string to_json(const EvalReport& report, const std::string& split_name);
void write_per_class_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace tempaug
