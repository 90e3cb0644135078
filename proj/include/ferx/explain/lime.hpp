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

#include "ferx/explain/attribution.hpp"
#include "ferx/explain/coalition.hpp"

namespace ferx::explain {

struct LimeConfig {
  int num_samples = 1000;
  double kernel_width = 0.25;
  double ridge = 1e-3;
  double baseline = 0.5;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate(int segments) const;
};

struct LimeFit {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Weighted ridge regression with an unpenalized intercept. Throws when the
// regularized normal matrix is singular.
LimeFit fit_weighted_ridge(const CoalitionMatrix& z, const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                           double ridge);

// Row 0 is the all-on coalition; the rest switch each segment on with
// probability 1/2. Sample weight is exp(-d^2 / width^2) with d the fraction
// of segments switched off.
CoalitionMatrix lime_samples(int segments, const LimeConfig& cfg);
Eigen::VectorXd lime_weights(const CoalitionMatrix& z, double kernel_width);

LimeFit lime_fit(const CoalitionScorer& scorer, int segments, const LimeConfig& cfg);

Attribution lime_explain(const nn::Network& net, const nn::Tensor<float>& image, const SegmentMap& segments,
                         int class_index, const LimeConfig& cfg);

}  // namespace ferx::explain
