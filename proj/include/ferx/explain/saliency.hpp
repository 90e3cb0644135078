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

#include "ferx/explain/attribution.hpp"
#include "ferx/nn/predict.hpp"

namespace ferx::explain {

// |d logit / d pixel| for the chosen class.
template <typename Scalar>
Attribution saliency(const nn::BasicNetwork<Scalar>& net, const nn::Tensor<Scalar>& image, int class_index) {
  const nn::Tensor<Scalar> g = nn::input_gradient(net, image, class_index, nn::GradientTarget::logit);
  Attribution a;
  a.method = Method::salmap;
  a.scope = Scope::pixel;
  a.class_index = class_index;
  const auto& shape = image.shape();
  a.height = shape.size() >= 2 ? shape[shape.size() - 2] : 1;
  a.width = shape.back();
  a.config = {{"target", "logit"}};
  a.scores = g.data().template cast<double>().cwiseAbs();
  return a;
}

}  // namespace ferx::explain
