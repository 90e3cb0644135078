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
#include <string>
#include <vector>

namespace ferx::eval {

// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// P(F > f) for F(d1, d2).
double f_upper_tail(double f, double d1, double d2);

struct AnovaResult {
  double f = 0.0;
  int df_between = 0;
  int df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  double p = 1.0;
  // Set when the within-group variance is zero, where F is not finite or
  // not defined. F = 0, p = 1 if the groups are also identical; F = inf,
  // p = 0 otherwise.
  bool degenerate = false;
};

// Needs at least 2 groups of at least 2 observations.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

struct TukeyConfig {
  double alpha = 0.05;
  long draws = 1'000'000;
  int streams = 8;
  int threads = 1;
  std::uint64_t seed = 0x7e57;
};

struct TukeyPair {
  int a = 0;
  int b = 0;
  double mean_diff = 0.0;  // mean_b - mean_a
  double q = 0.0;
  double p = 1.0;
  bool significant = false;
};

struct TukeyResult {
  std::vector<TukeyPair> pairs;  // (0,1), (0,2), ..., (k-2,k-1)
  double ms_within = 0.0;
  int df_within = 0;
};

// Draws of the studentized range max|Z_i - Z_j| / sqrt(chi2_df / df) for k
// groups. Stream s uses seed mix_seed(seed, s); streams are concatenated in
// order and sorted, so the result does not depend on the thread count.
std::vector<double> studentized_range_draws(int k, int df, const TukeyConfig& cfg);

// Upper tail estimated from sorted draws.
double studentized_range_upper_tail(const std::vector<double>& sorted_draws, double q);

// Pairwise q = |mean_i - mean_j| / sqrt(MSW / 2 * (1/n_i + 1/n_j)).
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, const TukeyConfig& cfg = {});

// Same, reusing draws from studentized_range_draws(groups.size(), N - k).
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, const TukeyConfig& cfg,
                      const std::vector<double>& sorted_draws);

struct BoxplotStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

// Linear interpolation between order statistics (type 7).
double quantile_type7(std::vector<double> values, double p);

// Whiskers reach the most extreme values within 1.5 IQR of the box.
BoxplotStats boxplot_stats(const std::vector<double>& values);

}  // namespace ferx::eval
