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

#include <cstdint>
#include <functional>

#include "ferx/explain/attribution.hpp"
#include "ferx/explain/coalition.hpp"

namespace ferx::explain {

struct ShapConfig {
  int num_samples = 2048;
  double baseline = 0.5;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate(int segments) const;
};

// pi(s) = (M-1) / (C(M,s) s (M-s)) for 0 < s < M.
double shapley_kernel_weight(int players, int size);

struct ShapFit {
  Eigen::VectorXd phi;
  double empty_value = 0.0;  // f(all off)
  double full_value = 0.0;   // f(all on)
  bool enumerated = false;   // every coalition was used
};

// Shapley-kernel weighted least squares with sum(phi) = f(all on) - f(all
// off) imposed by eliminating the last player. Every proper coalition is
// used when the sample budget covers 2^M - 2 of them; otherwise sizes are
// drawn in proportion to the kernel mass and each draw is paired with its
// complement.
ShapFit shap_fit(const CoalitionScorer& scorer, int players, const ShapConfig& cfg);

Attribution kernel_shap(const nn::Network& net, const nn::Tensor<float>& image, const SegmentMap& segments,
                        int class_index, const ShapConfig& cfg);

inline constexpr int kMaxExactPlayers = 12;

// Classical Shapley values by full enumeration. Bit i of the argument marks
// player i as present.
Eigen::VectorXd exact_shapley(const std::function<double(std::uint64_t)>& value, int players);

// Adapts a set function to the coalition-matrix interface.
CoalitionScorer scorer_from_set_function(std::function<double(std::uint64_t)> value);

}  // namespace ferx::explain
