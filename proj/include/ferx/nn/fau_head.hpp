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

#include <array>
#include <cstdint>
#include <vector>

#include "ferx/nn/engine.hpp"
#include "ferx/nn/network.hpp"
#include "ferx/nn/predict.hpp"
#include "ferx/nn/reference.hpp"

namespace ferx::nn {

inline constexpr int kFauCount = 15;
inline constexpr int kFauInputWidth = kFeatureWidth + kEmotionClasses;

// active[k] holds exactly when confidence[k] > 0.5.
struct FauActivations {
  std::array<bool, kFauCount> active{};
  std::array<double, kFauCount> confidence{};

  int active_count() const {
    int n = 0;
    for (bool a : active) n += a ? 1 : 0;
    return n;
  }

  static FauActivations from_confidences(const std::array<double, kFauCount>& confidence) {
    FauActivations out;
    out.confidence = confidence;
    for (int k = 0; k < kFauCount; ++k) out.active[k] = confidence[k] > 0.5;
    return out;
  }

  bool operator==(const FauActivations&) const = default;
};

// Dense stack from the 4040-wide concatenation of features and class
// probabilities to 15 sigmoid outputs.
class FauHead {
 public:
  explicit FauHead(Network net);

  const Network& network() const { return net_; }

 private:
  Network net_;
};

FauHead make_fau_head(const std::vector<int>& hidden, std::uint64_t seed);

// Features followed by the probability vector.
Tensor<float> fau_head_input(const EmotionPrediction& pred);

FauActivations predict_faus(const FauHead& head, const EmotionPrediction& pred);

}  // namespace ferx::nn
