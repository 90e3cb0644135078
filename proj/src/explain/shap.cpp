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

#include "ferx/explain/shap.hpp"

#include <Eigen/Cholesky>
#include "conditioning.hpp"
#include "ferx/core/random.hpp"
#include <Eigen/LU>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace ferx::explain {

void ShapConfig::validate(int segments) const {
  if (segments < 2) throw ExplainError("Kernel SHAP needs at least 2 segments, got " + std::to_string(segments));
  if (segments > 64) throw ExplainError("Kernel SHAP supports at most 64 segments");
  if (num_samples < segments + 2) {
    throw ExplainError("num_samples " + std::to_string(num_samples) + " below segments + 2 = " +
                       std::to_string(segments + 2));
  }
  if (!std::isfinite(baseline)) throw ExplainError("baseline must be finite");
  if (threads < 1) throw ExplainError("threads must be positive");
}

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double shapley_kernel_weight(int players, int size) {
  if (size <= 0 || size >= players) throw ExplainError("kernel weight is defined for 0 < size < players");
  return (players - 1.0) / (binomial(players, size) * size * (players - size));
}

ShapFit shap_fit(const CoalitionScorer& scorer, int players, const ShapConfig& cfg) {
  cfg.validate(players);
  const int m = players;
  const bool enumerate = m <= 30 && static_cast<double>(cfg.num_samples) >= std::ldexp(1.0, m) - 2.0;

  // Rows 0 and 1 are the empty and full coalitions.
  CoalitionMatrix z;
  Eigen::VectorXd w;
  if (enumerate) {
    const std::uint64_t n = (std::uint64_t{1} << m) - 2;
    z.resize(static_cast<Eigen::Index>(n + 2), m);
    w.resize(static_cast<Eigen::Index>(n));
    for (std::uint64_t s = 1; s <= n; ++s) {
      for (int k = 0; k < m; ++k) z(static_cast<Eigen::Index>(s + 1), k) = (s >> k) & 1u;
      w[static_cast<Eigen::Index>(s - 1)] = shapley_kernel_weight(m, std::popcount(s));
    }
  } else {
    Rng rng(cfg.seed);
    std::vector<double> cdf(m - 1);
    double acc = 0.0;
    for (int s = 1; s < m; ++s) cdf[s - 1] = (acc += 1.0 / (static_cast<double>(s) * (m - s)));
    const int pairs = cfg.num_samples / 2;
    z.resize(2 + 2 * static_cast<Eigen::Index>(pairs), m);
    w = Eigen::VectorXd::Ones(2 * pairs);
    std::vector<int> idx(m);
    for (int p = 0; p < pairs; ++p) {
      const double u = rng.uniform01() * acc;
      int size = 1;
      while (size < m - 1 && cdf[size - 1] <= u) ++size;
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = 0; i < size; ++i) std::swap(idx[i], idx[i + rng.below(m - i)]);
      const Eigen::Index r = 2 + 2 * static_cast<Eigen::Index>(p);
      z.row(r).setZero();
      for (int i = 0; i < size; ++i) z(r, idx[i]) = 1;
      z.row(r + 1) = (1 - z.row(r).array()).matrix();
    }
  }
  z.row(0).setZero();
  z.row(1).setOnes();

  const Eigen::VectorXd y = scorer(z);
  ShapFit fit;
  fit.enumerated = enumerate;
  fit.empty_value = y[0];
  fit.full_value = y[1];
  const double delta = fit.full_value - fit.empty_value;

  // phi_last = delta - sum(others): regress y - f0 - z_last * delta on
  // (z_k - z_last) for the first m - 1 players.
  const Eigen::Index rows = z.rows() - 2;
  Eigen::MatrixXd a(rows, m - 1);
  Eigen::VectorXd t(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double last = z(r + 2, m - 1);
    for (int k = 0; k < m - 1; ++k) a(r, k) = z(r + 2, k) - last;
    t[r] = y[r + 2] - fit.empty_value - last * delta;
  }
  const Eigen::MatrixXd aw = a.transpose() * w.asDiagonal();
  const Eigen::MatrixXd normal = aw * a;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (!detail::well_conditioned(ldlt)) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
    throw ExplainError("Kernel SHAP system is rank deficient: rank " + std::to_string(lu.rank()) + " of " +
                       std::to_string(m - 1) + " after " + std::to_string(rows) +
                       " coalitions; raise num_samples");
  }
  const Eigen::VectorXd head = ldlt.solve(aw * t);
  fit.phi.resize(m);
  fit.phi.head(m - 1) = head;
  fit.phi[m - 1] = delta - head.sum();
  return fit;
}

Attribution kernel_shap(const nn::Network& net, const nn::Tensor<float>& image, const SegmentMap& segments,
                        int class_index, const ShapConfig& cfg) {
  cfg.validate(segments.count);
  const auto scorer = occlusion_scorer(net, image, segments, class_index, {cfg.baseline, cfg.threads});
  const ShapFit fit = shap_fit(scorer, segments.count, cfg);
  Attribution a;
  a.method = Method::shap;
  a.scope = Scope::segment;
  a.class_index = class_index;
  a.width = segments.width;
  a.height = segments.height;
  a.seed = cfg.seed;
  a.config = {{"num_samples", std::to_string(cfg.num_samples)},
              {"baseline", format_real(cfg.baseline)},
              {"segments", std::to_string(segments.count)},
              {"enumerated", fit.enumerated ? "1" : "0"},
              {"empty_value", format_real(fit.empty_value)},
              {"full_value", format_real(fit.full_value)}};
  a.scores = fit.phi;
  return a;
}

Eigen::VectorXd exact_shapley(const std::function<double(std::uint64_t)>& value, int players) {
  if (players < 1) throw ExplainError("exact Shapley needs at least one player");
  if (players > kMaxExactPlayers) {
    throw ExplainError("exact Shapley refuses " + std::to_string(players) + " players (limit " +
                       std::to_string(kMaxExactPlayers) + ")");
  }
  const int m = players;
  const std::uint64_t subsets = std::uint64_t{1} << m;
  std::vector<double> v(subsets);
  for (std::uint64_t s = 0; s < subsets; ++s) v[s] = value(s);
  // weight[s] = s! (m - s - 1)! / m!
  std::vector<double> weight(m);
  for (int s = 0; s < m; ++s) weight[s] = 1.0 / (m * binomial(m - 1, s));
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double sum = 0.0;
    for (std::uint64_t s = 0; s < subsets; ++s) {
      if (s & bit) continue;
      sum += weight[std::popcount(s)] * (v[s | bit] - v[s]);
    }
    phi[i] = sum;
  }
  return phi;
}

CoalitionScorer scorer_from_set_function(std::function<double(std::uint64_t)> value) {
  return [value = std::move(value)](const CoalitionMatrix& z) {
    if (z.cols() > 64) throw ExplainError("set functions take at most 64 players");
    Eigen::VectorXd out(z.rows());
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      std::uint64_t s = 0;
      for (Eigen::Index k = 0; k < z.cols(); ++k) {
        if (z(r, k)) s |= std::uint64_t{1} << k;
      }
      out[r] = value(s);
    }
    return out;
  };
}

}  // namespace ferx::explain
