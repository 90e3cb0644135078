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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "ferx/core/random.hpp"
#include "ferx/explain/attribution.hpp"
#include "ferx/explain/lime.hpp"
#include "ferx/explain/saliency.hpp"
#include "ferx/explain/segments.hpp"
#include "ferx/explain/shap.hpp"
#include "ferx/nn/reference.hpp"
#include "test_nets.hpp"

namespace ferx::explain {
namespace {

using nn::Tensor;

CoalitionScorer additive_scorer(const Eigen::VectorXd& w, double bias) {
  return [w, bias](const CoalitionMatrix& z) -> Eigen::VectorXd {
    return (z.cast<double>() * w).array() + bias;
  };
}

Eigen::VectorXd random_weights(Rng& rng, int m) {
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) w[k] = 0.3 * rng.normal();
  return w;
}

// Lookup-table game with an independent value per coalition.
std::function<double(std::uint64_t)> random_game(Rng& rng, int m) {
  std::vector<double> table(std::size_t{1} << m);
  for (auto& v : table) v = rng.normal();
  return [table](std::uint64_t s) { return table[s]; };
}

TEST(SegmentGrid, EvenTiling) {
  const SegmentMap map = segment_grid(48, 48, 8);
  EXPECT_EQ(map.count, 36);
  for (const long a : map.areas()) EXPECT_EQ(a, 64);
}

TEST(SegmentGrid, EdgeCellsAbsorbRemainder) {
  const SegmentMap map = segment_grid(50, 50, 8);
  ASSERT_EQ(map.count, 36);
  const auto areas = map.areas();
  const int side[6] = {8, 8, 8, 8, 8, 10};
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) EXPECT_EQ(areas[r * 6 + c], side[r] * side[c]);
  }
  EXPECT_EQ(map.ids(49, 49), 35);
  EXPECT_EQ(map.ids(47, 39), 34);
}

TEST(SegmentGrid, RejectsDegenerateCells) {
  EXPECT_THROW(segment_grid(48, 48, 48), ExplainError);
  EXPECT_THROW(segment_grid(48, 48, 0), ExplainError);
  EXPECT_THROW(segment_grid(48, 40, 41), ExplainError);
  EXPECT_NO_THROW(segment_grid(48, 40, 24));
}

TEST(SegmentGrid, IdsAreContiguousAndCoverEveryPixel) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = 2 + static_cast<int>(rng.below(40));
    const int w = 2 + static_cast<int>(rng.below(40));
    const int cell = 1 + static_cast<int>(rng.below(std::min(h, w)));
    if ((h / cell) * (w / cell) < 2) continue;
    const SegmentMap map = segment_grid(h, w, cell);
    long total = 0;
    for (const long a : map.areas()) {
      EXPECT_GT(a, 0);
      total += a;
    }
    EXPECT_EQ(total, static_cast<long>(h) * w);
    EXPECT_EQ(map.ids.minCoeff(), 0);
    EXPECT_EQ(map.ids.maxCoeff(), map.count - 1);
  }
}

TEST(Lime, RecoversAdditiveModel) {
  Rng rng(2);
  const Eigen::VectorXd w = random_weights(rng, 36);
  LimeConfig cfg;
  cfg.seed = 5;
  const LimeFit fit = lime_fit(additive_scorer(w, 0.2), 36, cfg);
  EXPECT_LT((fit.coefficients - w).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_GT(fit.r_squared, 0.9);
  EXPECT_NEAR(fit.intercept, 0.2, 0.05);
}

TEST(Lime, ConstantModelGivesZeroCoefficients) {
  LimeConfig cfg;
  const LimeFit fit = lime_fit([](const CoalitionMatrix& z) { return Eigen::VectorXd::Constant(z.rows(), 0.7); },
                               10, cfg);
  EXPECT_LE(fit.coefficients.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(fit.intercept, 0.7, 1e-9);
}

TEST(Lime, SamplesStartFromFullCoalition) {
  LimeConfig cfg;
  cfg.num_samples = 50;
  const CoalitionMatrix z = lime_samples(12, cfg);
  EXPECT_TRUE((z.row(0).array() == 1).all());
  const Eigen::VectorXd w = lime_weights(z, cfg.kernel_width);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double d = (12.0 - z.row(i).cast<double>().sum()) / 12.0;
    EXPECT_DOUBLE_EQ(w[i], std::exp(-d * d / 0.0625));
  }
}

TEST(Lime, SingularSystemIsReported) {
  CoalitionMatrix z(6, 3);
  for (int i = 0; i < 6; ++i) z.row(i) << 1, 0, 1;
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(6);
  EXPECT_THROW(fit_weighted_ridge(z, y, Eigen::VectorXd::Ones(6), 0.0), ExplainError);
  EXPECT_NO_THROW(fit_weighted_ridge(z, y, Eigen::VectorXd::Ones(6), 1e-3));
}

TEST(Lime, ValidatesConfig) {
  LimeConfig cfg;
  cfg.num_samples = 37;
  EXPECT_THROW(cfg.validate(36), ExplainError);
  cfg.num_samples = 38;
  EXPECT_NO_THROW(cfg.validate(36));
  cfg.kernel_width = 0.0;
  EXPECT_THROW(cfg.validate(36), ExplainError);
  cfg.kernel_width = 0.25;
  cfg.ridge = -1.0;
  EXPECT_THROW(cfg.validate(36), ExplainError);
}

TEST(Lime, NetworkRunIsSeedStableAndThreadIndependent) {
  const nn::Network net = nn::make_reference_network({}, 3);
  Rng rng(4);
  const Tensor<float> image = testing::random_image(rng, 48, 48).cast<float>();
  const SegmentMap seg = segment_grid(48, 48, 8);
  LimeConfig cfg;
  cfg.num_samples = 200;
  cfg.seed = 9;
  const Attribution a = lime_explain(net, image, seg, 2, cfg);
  cfg.threads = 3;
  const Attribution b = lime_explain(net, image, seg, 2, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_attribution(a), serialize_attribution(b));
  EXPECT_EQ(a.scores.size(), 36);
  EXPECT_TRUE(a.scores.allFinite());
  cfg.seed = 10;
  EXPECT_NE(lime_explain(net, image, seg, 2, cfg).scores, a.scores);
}

TEST(Shap, KernelWeightFormula) {
  // M = 4: C(4,1) = 4, C(4,2) = 6.
  EXPECT_DOUBLE_EQ(shapley_kernel_weight(4, 1), 3.0 / (4 * 1 * 3));
  EXPECT_DOUBLE_EQ(shapley_kernel_weight(4, 2), 3.0 / (6 * 2 * 2));
  EXPECT_THROW(shapley_kernel_weight(4, 0), ExplainError);
  EXPECT_THROW(shapley_kernel_weight(4, 4), ExplainError);
}

TEST(Shap, AdditiveModelGivesWeights) {
  Rng rng(6);
  const Eigen::VectorXd w = random_weights(rng, 6);
  const ShapFit fit = shap_fit(additive_scorer(w, -0.4), 6, {});
  EXPECT_TRUE(fit.enumerated);
  EXPECT_LT((fit.phi - w).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Shap, SampledAdditiveModelGivesWeights) {
  Rng rng(7);
  const Eigen::VectorXd w = random_weights(rng, 40);
  const ShapFit fit = shap_fit(additive_scorer(w, 0.1), 40, {});
  EXPECT_FALSE(fit.enumerated);
  EXPECT_LT((fit.phi - w).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Shap, MatchesExactShapleyOnRandomGames) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(7));
    const auto game = random_game(rng, m);
    const ShapFit fit = shap_fit(scorer_from_set_function(game), m, {});
    const Eigen::VectorXd exact = exact_shapley(game, m);
    EXPECT_LT((fit.phi - exact).cwiseAbs().maxCoeff(), 1e-3) << "M=" << m;
    EXPECT_LE(std::abs(fit.phi.sum() - (game((1u << m) - 1) - game(0))), 1e-9);
  }
}

TEST(Shap, SymmetricGameSharesEqually) {
  Rng rng(9);
  for (int m = 2; m <= 8; ++m) {
    std::vector<double> by_size(m + 1);
    for (auto& v : by_size) v = rng.normal();
    const auto game = [by_size](std::uint64_t s) { return by_size[std::popcount(s)]; };
    const ShapFit fit = shap_fit(scorer_from_set_function(game), m, {});
    EXPECT_LE(fit.phi.maxCoeff() - fit.phi.minCoeff(), 1e-6) << "M=" << m;
  }
}

TEST(Shap, EfficiencyHoldsWhenSampling) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 12 + static_cast<int>(rng.below(30));
    std::vector<double> w(m), pair(m);
    for (int k = 0; k < m; ++k) {
      w[k] = rng.normal();
      pair[k] = rng.normal();
    }
    // Additive part plus pairwise interactions between neighbours.
    const auto game = [w, pair, m](std::uint64_t s) {
      double v = 0.0;
      for (int k = 0; k < m; ++k) {
        const bool on = (s >> k) & 1u;
        const bool next = (s >> ((k + 1) % m)) & 1u;
        v += on * w[k] + (on && next) * pair[k];
      }
      return std::tanh(v);
    };
    ShapConfig cfg;
    cfg.seed = trial;
    const ShapFit fit = shap_fit(scorer_from_set_function(game), m, cfg);
    const std::uint64_t all = m == 64 ? ~0ULL : (std::uint64_t{1} << m) - 1;
    EXPECT_LE(std::abs(fit.phi.sum() - (game(all) - game(0))), 1e-9);
  }
}

TEST(Shap, RankDeficiencyIsDiagnosed) {
  ShapConfig cfg;
  cfg.num_samples = 12;
  try {
    shap_fit(additive_scorer(Eigen::VectorXd::Ones(10), 0.0), 10, cfg);
    FAIL() << "expected rank error";
  } catch (const ExplainError& e) {
    EXPECT_NE(std::string(e.what()).find("rank"), std::string::npos) << e.what();
  }
}

TEST(Shap, RejectsTooFewPlayers) {
  EXPECT_THROW(shap_fit(additive_scorer(Eigen::VectorXd::Ones(1), 0.0), 1, {}), ExplainError);
  EXPECT_THROW(shap_fit(additive_scorer(Eigen::VectorXd::Ones(65), 0.0), 65, {}), ExplainError);
}

TEST(Shap, NetworkRunIsSeedStable) {
  const nn::Network net = nn::make_reference_network({}, 5);
  Rng rng(11);
  const Tensor<float> image = testing::random_image(rng, 48, 48).cast<float>();
  const SegmentMap seg = segment_grid(48, 48, 8);
  ShapConfig cfg;
  cfg.num_samples = 256;
  cfg.seed = 3;
  const Attribution a = kernel_shap(net, image, seg, 4, cfg);
  cfg.threads = 2;
  const Attribution b = kernel_shap(net, image, seg, 4, cfg);
  EXPECT_EQ(a, b);
  const auto pred = nn::forward(net, image);
  const auto full = std::stod(a.config[5].second);
  EXPECT_NEAR(full, pred.probs[4], 1e-7);
}

TEST(ExactShapley, UnanimityGame) {
  const auto game = [](std::uint64_t s) { return (s & 3u) == 3u ? 1.0 : 0.0; };
  const Eigen::VectorXd phi = exact_shapley(game, 3);
  EXPECT_NEAR(phi[0], 0.5, 1e-15);
  EXPECT_NEAR(phi[1], 0.5, 1e-15);
  EXPECT_NEAR(phi[2], 0.0, 1e-15);
}

TEST(ExactShapley, AdditiveAndNullPlayers) {
  const std::vector<double> w = {0.5, -1.25, 2.0, 0.0, 3.5};
  const auto game = [&w](std::uint64_t s) {
    double v = 0.0;
    for (int k = 0; k < 5; ++k) {
      if ((s >> k) & 1u) v += w[k];
    }
    return v;
  };
  const Eigen::VectorXd phi = exact_shapley(game, 5);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(phi[k], w[k], 1e-12);
  EXPECT_EQ(phi[3], 0.0);
}

TEST(ExactShapley, RefusesLargeGames) {
  EXPECT_THROW(exact_shapley([](std::uint64_t) { return 0.0; }, 13), ExplainError);
}

TEST(Saliency, LinearNetworkGivesAbsoluteWeights) {
  Rng rng(12);
  nn::Dense<double> d = nn::Dense<double>::zeros(20, 8);
  for (Eigen::Index i = 0; i < d.weights.size(); ++i) d.weights.data()[i] = rng.normal();
  const testing::NetD net(nn::Geometry{1, 4, 5}, {nn::Flatten{}, d});
  const auto image = testing::random_image(rng, 4, 5);
  for (int c = 0; c < 8; ++c) {
    const Attribution a = saliency(net, image, c);
    ASSERT_EQ(a.scores.size(), 20);
    EXPECT_EQ(a.width, 5);
    EXPECT_EQ(a.height, 4);
    for (int i = 0; i < 20; ++i) EXPECT_NEAR(a.scores[i], std::abs(d.weights(c, i)), 1e-9);
  }
}

TEST(Saliency, MatchesFiniteDifferenceMagnitudes) {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto net = testing::random_small_net(300 + trial);
    const auto image = testing::random_image(rng, 8, 8);
    const int cls = static_cast<int>(rng.below(8));
    const Attribution a = saliency(net, image, cls);
    const Eigen::VectorXd fd =
        testing::finite_difference(net, image, cls, nn::GradientTarget::logit, 1e-4).cwiseAbs();
    const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.scores - fd).cwiseAbs().maxCoeff() / scale, 1e-3);
    EXPECT_GE(a.scores.minCoeff(), 0.0);
  }
}

Attribution segment_attr(std::vector<double> scores) {
  Attribution a;
  a.scores = Eigen::Map<Eigen::VectorXd>(scores.data(), static_cast<Eigen::Index>(scores.size()));
  return a;
}

TEST(AttributionMask, TopSegmentsByScore) {
  const SegmentMap seg = segment_grid(4, 4, 2);
  const auto mask = attribution_to_mask(segment_attr({4, 3, 2, 1}), &seg, 0.5);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_EQ(mask(y, x), seg.ids(y, x) <= 1);
  }
}

TEST(AttributionMask, FirstReachStopsAtOneSegment) {
  const SegmentMap seg = segment_grid(4, 4, 2);
  const auto mask = attribution_to_mask(segment_attr({1, 5, 2, 3}), &seg, 0.01);
  EXPECT_EQ(mask.count(), 4);
  EXPECT_TRUE(mask(0, 2));
}

TEST(AttributionMask, TiesGoToLowerIndex) {
  const SegmentMap seg = segment_grid(4, 4, 2);
  const auto mask = attribution_to_mask(segment_attr({1, 1, 1, 1}), &seg, 0.5);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_EQ(mask(y, x), seg.ids(y, x) <= 1);
  }
}

TEST(AttributionMask, RejectsBadInput) {
  const SegmentMap seg = segment_grid(4, 4, 2);
  EXPECT_THROW(attribution_to_mask(segment_attr({}), &seg, 0.5), ExplainError);
  EXPECT_THROW(attribution_to_mask(segment_attr({1, 2, 3, 4}), &seg, 0.0), ExplainError);
  EXPECT_THROW(attribution_to_mask(segment_attr({1, 2, 3, 4}), &seg, 1.0), ExplainError);
  EXPECT_THROW(attribution_to_mask(segment_attr({1, 2, 3}), &seg, 0.5), ExplainError);
  EXPECT_THROW(attribution_to_mask(segment_attr({1, 2, 3, 4}), nullptr, 0.5), ExplainError);
}

// Marked fraction reaches coverage, and dropping the weakest marked pixel
// would fall short of it.
TEST(AttributionMask, PixelCoverageIsMinimal) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    Attribution a;
    a.scope = Scope::pixel;
    a.width = 1 + static_cast<int>(rng.below(12));
    a.height = 1 + static_cast<int>(rng.below(12));
    a.scores.resize(a.width * a.height);
    for (Eigen::Index i = 0; i < a.scores.size(); ++i) a.scores[i] = static_cast<double>(rng.below(5));
    const double coverage = 0.01 + 0.98 * rng.uniform01();
    const auto mask = attribution_to_mask(a, nullptr, coverage);
    const double total = static_cast<double>(a.scores.size());
    EXPECT_GE(mask.count() / total, coverage);
    EXPECT_LT((mask.count() - 1) / total, coverage);
    double lowest_marked = 1e9, highest_unmarked = -1e9;
    for (Eigen::Index i = 0; i < a.scores.size(); ++i) {
      if (mask.data()[i]) {
        lowest_marked = std::min(lowest_marked, a.scores[i]);
      } else {
        highest_unmarked = std::max(highest_unmarked, a.scores[i]);
      }
    }
    EXPECT_GE(lowest_marked, highest_unmarked);
  }
}

TEST(AttributionRecord, CanonicalText) {
  Attribution a;
  a.method = Method::shap;
  a.scope = Scope::segment;
  a.class_index = 3;
  a.width = 4;
  a.height = 4;
  a.seed = 42;
  a.config = {{"num_samples", "2048"}, {"baseline", "0.5"}};
  a.scores = Eigen::Vector4d(0.1, -2.0 / 3.0, 1e-12, 12345678.9);
  const std::string text = serialize_attribution(a);
  EXPECT_EQ(text,
            "ferx-attribution 1\n"
            "method SHAP\n"
            "class 3\n"
            "scope segment\n"
            "seed 42\n"
            "width 4\n"
            "height 4\n"
            "config num_samples 2048\n"
            "config baseline 0.5\n"
            "count 4\n"
            "scores 0.1 -0.666666667 1e-12 12345678.9\n");
  const Attribution back = parse_attribution(text);
  EXPECT_EQ(serialize_attribution(back), text);
  EXPECT_EQ(back.config, a.config);
  EXPECT_THROW(parse_attribution("nonsense"), ExplainError);
}

}  // namespace
}  // namespace ferx::explain
