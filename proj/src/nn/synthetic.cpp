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

#include "ferx/nn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ferx::nn {

Tensor<float> make_blob_image(int class_index, int classes, int height, int width, std::uint64_t seed) {
  Rng rng(seed);
  const double angle = 2.0 * std::numbers::pi * class_index / classes;
  const double scale = std::min(height, width);
  const double cx = 0.5 * (width - 1) + 0.28 * scale * std::cos(angle) + 0.04 * scale * (2.0 * rng.uniform01() - 1.0);
  const double cy = 0.5 * (height - 1) + 0.28 * scale * std::sin(angle) + 0.04 * scale * (2.0 * rng.uniform01() - 1.0);
  const double sigma = 0.09 * scale;
  const double amplitude = 0.7 + 0.2 * rng.uniform01();
  Vector<float> data(static_cast<Eigen::Index>(height) * width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const double v = 0.1 + amplitude * std::exp(-d2 / (2.0 * sigma * sigma)) + 0.08 * (rng.uniform01() - 0.5);
      data[static_cast<Eigen::Index>(y) * width + x] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return Tensor<float>({height, width}, std::move(data));
}

LabeledSet<float> make_blob_dataset(int classes, int per_class, int height, int width, std::uint64_t seed) {
  LabeledSet<float> set;
  for (int i = 0; i < per_class; ++i) {
    for (int c = 0; c < classes; ++c) {
      const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(i) * classes + c);
      set.inputs.push_back(make_blob_image(c, classes, height, width, s));
      Vector<float> t = Vector<float>::Zero(classes);
      t[c] = 1.0f;
      set.targets.push_back(std::move(t));
    }
  }
  return set;
}

std::array<bool, kFauCount> emotion_fau_prototype(Emotion emotion) {
  // Positions: 0 AU1, 1 AU2, 2 AU4, 3 AU5, 4 AU6, 5 AU7, 6 AU9, 7 AU10,
  // 8 AU12, 9 AU15, 10 AU17, 11 AU20, 12 AU23, 13 AU25, 14 AU26.
  std::array<bool, kFauCount> p{};
  auto set = [&](std::initializer_list<int> idx) {
    for (const int i : idx) p[i] = true;
  };
  switch (emotion) {
    case Emotion::neutral: break;
    case Emotion::anger: set({2, 3, 5, 12}); break;
    case Emotion::sadness: set({0, 2, 9}); break;
    case Emotion::happiness: set({4, 8, 13}); break;
    case Emotion::fear: set({0, 1, 2, 3, 5, 11, 14}); break;
    case Emotion::surprise: set({0, 1, 3, 13, 14}); break;
    case Emotion::disgust: set({6, 7, 9, 10}); break;
    case Emotion::contempt: set({8}); break;
  }
  return p;
}

LabeledSet<float> make_fau_dataset(const Network& net, const LabeledSet<float>& images) {
  LabeledSet<float> set;
  const auto preds = forward_many(net, images.inputs);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    Eigen::Index cls;
    images.targets[i].maxCoeff(&cls);
    const auto proto = emotion_fau_prototype(static_cast<Emotion>(cls));
    Vector<float> t(kFauCount);
    for (int k = 0; k < kFauCount; ++k) t[k] = proto[k] ? 1.0f : 0.0f;
    set.inputs.push_back(fau_head_input(preds[i]));
    set.targets.push_back(std::move(t));
  }
  return set;
}

}  // namespace ferx::nn
