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

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "ferx/explain/segments.hpp"
#include "ferx/nn/predict.hpp"

namespace ferx::explain {

// One coalition per row; entry k is 1 when segment k keeps its pixels.
using CoalitionMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Model value for each coalition row.
using CoalitionScorer = std::function<Eigen::VectorXd(const CoalitionMatrix&)>;

struct OcclusionOptions {
  double baseline = 0.5;
  int threads = 1;
  int chunk = 64;
};

// Probability of class_index for the image with every switched-off segment
// filled by the baseline value. Rows are evaluated in fixed chunks indexed by
// row number, so results do not depend on the thread count. The scorer keeps
// a reference to net.
CoalitionScorer occlusion_scorer(const nn::Network& net, const nn::Tensor<float>& image, const SegmentMap& segments,
                                 int class_index, const OcclusionOptions& options = {});

// Image with the given coalition applied.
nn::Tensor<float> render_coalition(const nn::Tensor<float>& image, const SegmentMap& segments,
                                   const std::uint8_t* on, double baseline);

}  // namespace ferx::explain
