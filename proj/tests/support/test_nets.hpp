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

#include "ferx/core/random.hpp"
#include "ferx/nn/predict.hpp"
#include "ferx/nn/train.hpp"

namespace ferx::testing {

using namespace ferx::nn;

using NetD = BasicNetwork<double>;

inline Tensor<double> random_image(Rng& rng, int h, int w) {
  Vector<double> v(h * w);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform01();
  return Tensor<double>({h, w}, std::move(v));
}

inline NetD random_small_net(std::uint64_t seed) {
  std::vector<Layer<double>> layers;
  layers.emplace_back(Conv2d<double>::zeros(1, 3, 3));
  layers.emplace_back(Relu{});
  layers.emplace_back(MaxPool{2});
  layers.emplace_back(Flatten{});
  layers.emplace_back(Dense<double>::zeros(3 * 3 * 3, 6));
  layers.emplace_back(Relu{});
  layers.emplace_back(Dense<double>::zeros(6, 8));
  layers.emplace_back(Softmax{});
  NetD net(Geometry{1, 8, 8}, std::move(layers), 5);
  initialize(net, seed);
  // Non-zero biases so that ReLU kinks are not systematically at zero.
  Rng rng(seed ^ 0xb1a5);
  for (auto& l : net.mutable_layers()) {
    if (auto* c = std::get_if<Conv2d<double>>(&l)) c->bias = Vector<double>::NullaryExpr(c->bias.size(), [&] { return 0.2 * rng.normal(); });
    if (auto* d = std::get_if<Dense<double>>(&l)) d->bias = Vector<double>::NullaryExpr(d->bias.size(), [&] { return 0.2 * rng.normal(); });
  }
  return net;
}

// Central differences of the chosen class score, independent of backward().
inline Vector<double> finite_difference(const NetD& net, const Tensor<double>& image, int cls, GradientTarget target,
                                 double step) {
  Vector<double> g(image.size());
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    Tensor<double> plus = image, minus = image;
    plus.data()[i] += step;
    minus.data()[i] -= step;
    const auto fp = forward(net, plus);
    const auto fm = forward(net, minus);
    const double a = target == GradientTarget::logit ? fp.logits[cls] : fp.probs[cls];
    const double b = target == GradientTarget::logit ? fm.logits[cls] : fm.probs[cls];
    g[i] = (a - b) / (2.0 * step);
  }
  return g;
}

}  // namespace ferx::testing
