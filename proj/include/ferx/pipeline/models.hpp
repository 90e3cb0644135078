// Copyright 2026 The ferx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "ferx/nn/fau_head.hpp"
#include "ferx/nn/reference.hpp"
#include "ferx/nn/train.hpp"

namespace ferx::pipeline {

// A model directory holds fer.ferw and, optionally, fau.ferw.
inline constexpr const char* kFerWeightsFile = "fer.ferw";
inline constexpr const char* kFauWeightsFile = "fau.ferw";

struct ModelPair {
  nn::Network fer;
  std::optional<nn::FauHead> fau;
};

struct TrainOptions {
  nn::ReferenceOptions reference;
  int images_per_class = 40;
  std::vector<int> fau_hidden = {128};
  nn::TrainConfig fer{0.01, 8, 16, 0, 1e-4, 0.9};
  nn::TrainConfig fau{0.05, 20, 16, 0, 0.0, 0.9};
  std::uint64_t seed = 0;
};

struct TrainSummary {
  double fer_accuracy = 0.0;
  double fau_accuracy = 0.0;
};

// Trains the reference CNN on synthetic blob images, then the FAU head on its
// features. Progress lines go to log when given.
ModelPair train_models(const TrainOptions& options, TrainSummary* summary = nullptr, std::ostream* log = nullptr);

void save_models(const ModelPair& models, const std::filesystem::path& dir);

// Throws WeightFileError. The FAU head is loaded only when the file exists
// or require_fau is set.
ModelPair load_models(const std::filesystem::path& dir, bool require_fau);

}  // namespace ferx::pipeline
