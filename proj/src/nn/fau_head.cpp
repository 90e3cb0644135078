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

#include "ferx/nn/fau_head.hpp"

#include <string>

#include "ferx/nn/train.hpp"

namespace ferx::nn {

FauHead::FauHead(Network net) : net_(std::move(net)) {
  if (net_.input_geometry().size() != kFauInputWidth) {
    throw ShapeError("FAU head input must be " + std::to_string(kFauInputWidth) + " wide, got " +
                     std::to_string(net_.input_geometry().size()));
  }
  if (net_.output_width() != kFauCount) {
    throw ShapeError("FAU head must output " + std::to_string(kFauCount) + " units, got " +
                     std::to_string(net_.output_width()));
  }
  if (!net_.has_output_activation() || kind_of<float>(net_.layers().back()) != LayerKind::sigmoid) {
    throw ShapeError("FAU head must end in a sigmoid");
  }
}

FauHead make_fau_head(const std::vector<int>& hidden, std::uint64_t seed) {
  std::vector<Layer<float>> layers;
  int width = kFauInputWidth;
  for (const int h : hidden) {
    layers.emplace_back(Dense<float>::zeros(width, h));
    layers.emplace_back(Relu{});
    width = h;
  }
  layers.emplace_back(Dense<float>::zeros(width, kFauCount));
  layers.emplace_back(Sigmoid{});
  Network net(Geometry{kFauInputWidth, 1, 1}, std::move(layers));
  initialize(net, seed);
  return FauHead(std::move(net));
}

Tensor<float> fau_head_input(const EmotionPrediction& pred) {
  if (pred.features.size() != kFeatureWidth || pred.probs.size() != kEmotionClasses) {
    throw ShapeError("FAU head needs " + std::to_string(kFeatureWidth) + " features and " +
                     std::to_string(kEmotionClasses) + " probabilities, got " +
                     std::to_string(pred.features.size()) + " and " + std::to_string(pred.probs.size()));
  }
  Vector<float> x(kFauInputWidth);
  x.head(kFeatureWidth) = pred.features.cast<float>();
  x.tail(kEmotionClasses) = pred.probs.cast<float>();
  return Tensor<float>({kFauInputWidth}, std::move(x));
}

FauActivations predict_faus(const FauHead& head, const EmotionPrediction& pred) {
  const Tensor<float> input = fau_head_input(pred);
  const Vector<float> out = forward_batch(head.network(), Matrix<float>(input.data()));
  std::array<double, kFauCount> confidence{};
  for (int k = 0; k < kFauCount; ++k) confidence[k] = static_cast<double>(out[k]);
  return FauActivations::from_confidences(confidence);
}

}  // namespace ferx::nn
