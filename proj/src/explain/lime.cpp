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

#include "ferx/explain/lime.hpp"

#include <Eigen/Cholesky>
#include "conditioning.hpp"
#include "ferx/core/random.hpp"
#include <cmath>
#include <string>

namespace ferx::explain {

void LimeConfig::validate(int segments) const {
  if (segments < 2) throw ExplainError("LIME needs at least 2 segments");
  if (num_samples < segments + 2) {
    throw ExplainError("num_samples " + std::to_string(num_samples) + " below segments + 2 = " +
                       std::to_string(segments + 2));
  }
  if (!(kernel_width > 0.0) || !std::isfinite(kernel_width)) throw ExplainError("kernel width must be positive");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ExplainError("ridge must be non-negative");
  if (!std::isfinite(baseline)) throw ExplainError("baseline must be finite");
  if (threads < 1) throw ExplainError("threads must be positive");
}

CoalitionMatrix lime_samples(int segments, const LimeConfig& cfg) {
  Rng rng(cfg.seed);
  CoalitionMatrix z(cfg.num_samples, segments);
  z.row(0).setOnes();
  for (int i = 1; i < cfg.num_samples; ++i) {
    for (int k = 0; k < segments; ++k) z(i, k) = rng.coin() ? 1 : 0;
  }
  return z;
}

Eigen::VectorXd lime_weights(const CoalitionMatrix& z, double kernel_width) {
  Eigen::VectorXd w(z.rows());
  const double m = static_cast<double>(z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double d = (m - z.row(i).cast<double>().sum()) / m;
    w[i] = std::exp(-(d * d) / (kernel_width * kernel_width));
  }
  return w;
}

LimeFit fit_weighted_ridge(const CoalitionMatrix& z, const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                           double ridge) {
  const Eigen::Index n = z.rows();
  const Eigen::Index m = z.cols();
  if (y.size() != n || weights.size() != n) throw ExplainError("sample, target and weight counts differ");
  Eigen::MatrixXd x(n, m + 1);
  x.col(0).setOnes();
  x.rightCols(m) = z.cast<double>();
  const Eigen::MatrixXd xw = x.transpose() * weights.asDiagonal();
  Eigen::MatrixXd a = xw * x;
  a.diagonal().tail(m).array() += ridge;
  const Eigen::VectorXd b = xw * y;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (!detail::well_conditioned(ldlt)) {
    throw ExplainError("LIME regression system is singular (rcond " + format_real(ldlt.rcond()) +
                       "); raise ridge or num_samples");
  }
  const Eigen::VectorXd beta = ldlt.solve(b);
  LimeFit fit;
  fit.intercept = beta[0];
  fit.coefficients = beta.tail(m);
  const Eigen::VectorXd pred = x * beta;
  const double wsum = weights.sum();
  const double mean = weights.dot(y) / wsum;
  const double ss_res = (weights.array() * (y - pred).array().square()).sum();
  const double ss_tot = (weights.array() * (y.array() - mean).square()).sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

LimeFit lime_fit(const CoalitionScorer& scorer, int segments, const LimeConfig& cfg) {
  cfg.validate(segments);
  const CoalitionMatrix z = lime_samples(segments, cfg);
  const Eigen::VectorXd y = scorer(z);
  return fit_weighted_ridge(z, y, lime_weights(z, cfg.kernel_width), cfg.ridge);
}

Attribution lime_explain(const nn::Network& net, const nn::Tensor<float>& image, const SegmentMap& segments,
                         int class_index, const LimeConfig& cfg) {
  cfg.validate(segments.count);
  const auto scorer = occlusion_scorer(net, image, segments, class_index, {cfg.baseline, cfg.threads});
  const LimeFit fit = lime_fit(scorer, segments.count, cfg);
  Attribution a;
  a.method = Method::lime;
  a.scope = Scope::segment;
  a.class_index = class_index;
  a.width = segments.width;
  a.height = segments.height;
  a.seed = cfg.seed;
  a.config = {{"num_samples", std::to_string(cfg.num_samples)},
              {"kernel_width", format_real(cfg.kernel_width)},
              {"ridge", format_real(cfg.ridge)},
              {"baseline", format_real(cfg.baseline)},
              {"segments", std::to_string(segments.count)},
              {"intercept", format_real(fit.intercept)},
              {"r_squared", format_real(fit.r_squared)}};
  a.scores = fit.coefficients;
  return a;
}

}  // namespace ferx::explain
