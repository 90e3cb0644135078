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

#include "ferx/nn/reference.hpp"

#include <string>

#include "ferx/nn/train.hpp"

namespace ferx::nn {

Network make_reference_network(const ReferenceOptions& options, std::uint64_t seed) {
  const int h1 = options.height - 4;
  const int w1 = options.width - 4;
  const int h2 = h1 / 2 - 2;
  const int w2 = w1 / 2 - 2;
  if (h1 < 2 || w1 < 2 || h2 < 2 || w2 < 2) {
    throw ShapeError("input " + std::to_string(options.height) + "x" + std::to_string(options.width) +
                     " too small for the reference stack");
  }
  const int flat = options.conv2_channels * (h2 / 2) * (w2 / 2);
  std::vector<Layer<float>> layers;
  layers.emplace_back(Conv2d<float>::zeros(1, options.conv1_channels, 5));
  layers.emplace_back(Relu{});
  layers.emplace_back(MaxPool{2});
  layers.emplace_back(Conv2d<float>::zeros(options.conv1_channels, options.conv2_channels, 3));
  layers.emplace_back(Relu{});
  layers.emplace_back(MaxPool{2});
  layers.emplace_back(Flatten{});
  layers.emplace_back(Dense<float>::zeros(flat, kFeatureWidth));
  layers.emplace_back(Relu{});
  layers.emplace_back(Dense<float>::zeros(kFeatureWidth, kEmotionClasses));
  layers.emplace_back(Softmax{});
  Network net(Geometry{1, options.height, options.width}, std::move(layers), 8);
  initialize(net, seed);
  return net;
}

void validate_reference(const Network& net) {
  if (net.output_width() != kEmotionClasses) {
    throw ShapeError("reference network must output " + std::to_string(kEmotionClasses) + " classes, got " +
                     std::to_string(net.output_width()));
  }
  if (!net.has_output_activation() || kind_of<float>(net.layers().back()) != LayerKind::softmax) {
    throw ShapeError("reference network must end in softmax");
  }
  if (net.input_geometry().channels != 1) throw ShapeError("reference network takes grayscale input");
  const int tap = net.feature_tap();
  if (tap < 0 || net.output_geometry(tap).size() != kFeatureWidth) {
    throw ShapeError("reference network needs a " + std::to_string(kFeatureWidth) + "-wide feature tap");
  }
  const bool dense_fed = kind_of<float>(net.layers()[tap]) == LayerKind::dense ||
                         (tap > 0 && kind_of<float>(net.layers()[tap]) == LayerKind::relu &&
                          kind_of<float>(net.layers()[tap - 1]) == LayerKind::dense);
  if (!dense_fed) throw ShapeError("feature tap must be a dense layer or its activation");
}

}  // namespace ferx::nn
