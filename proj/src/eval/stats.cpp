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

#include "ferx/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "ferx/core/random.hpp"
#include "ferx/eval/records.hpp"

namespace ferx::eval {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw EvaluationError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw EvaluationError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw EvaluationError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw EvaluationError("F distribution needs positive degrees of freedom");
  if (std::isnan(f)) throw EvaluationError("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

namespace {

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw EvaluationError("need at least 2 groups, got " + std::to_string(groups.size()));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) {
      throw EvaluationError("group " + std::to_string(g) + " has " + std::to_string(groups[g].size()) +
                            " observations; need at least 2");
    }
    for (const double v : groups[g]) {
      if (!std::isfinite(v)) throw EvaluationError("non-finite observation in group " + std::to_string(g));
    }
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  const int k = static_cast<int>(groups.size());
  long n = 0;
  double total = 0.0;
  double magnitude = 0.0;
  for (const auto& g : groups) {
    n += static_cast<long>(g.size());
    for (const double v : g) {
      total += v;
      magnitude = std::max(magnitude, std::abs(v));
    }
  }
  const double grand = total / static_cast<double>(n);
  AnovaResult r;
  r.df_between = k - 1;
  r.df_within = static_cast<int>(n - k);
  for (const auto& g : groups) {
    const double m = mean_of(g);
    r.ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (const double v : g) r.ss_within += (v - m) * (v - m);
  }
  r.ms_between = r.ss_between / r.df_between;
  r.ms_within = r.ss_within / r.df_within;
  // Sums of squares below rounding noise of the data count as zero.
  const double noise = static_cast<double>(n) * (1e-12 * magnitude) * (1e-12 * magnitude);
  if (r.ss_within <= noise) {
    r.degenerate = true;
    if (r.ss_between <= noise) {
      r.f = 0.0;
      r.p = 1.0;
    } else {
      r.f = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  r.f = r.ms_between / r.ms_within;
  r.p = f_upper_tail(r.f, r.df_between, r.df_within);
  return r;
}

std::vector<double> studentized_range_draws(int k, int df, const TukeyConfig& cfg) {
  if (k < 2) throw EvaluationError("studentized range needs at least 2 groups");
  if (df < 1) throw EvaluationError("studentized range needs positive degrees of freedom");
  if (cfg.draws < 1 || cfg.streams < 1 || cfg.threads < 1) throw EvaluationError("bad Monte Carlo settings");
  std::vector<std::vector<double>> per_stream(cfg.streams);
  auto run = [&](int s) {
    const long count = cfg.draws / cfg.streams + (s < cfg.draws % cfg.streams ? 1 : 0);
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    auto& out = per_stream[s];
    out.reserve(count);
    for (long i = 0; i < count; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int j = 0; j < k; ++j) {
        const double z = rng.normal();
        lo = std::min(lo, z);
        hi = std::max(hi, z);
      }
      const double chi = rng.chi_squared(df);
      out.push_back((hi - lo) / std::sqrt(chi / df));
    }
  };
  const int threads = std::min(cfg.threads, cfg.streams);
  if (threads <= 1) {
    for (int s = 0; s < cfg.streams; ++s) run(s);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (int s = t; s < cfg.streams; s += threads) run(s);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<double> all;
  all.reserve(cfg.draws);
  for (const auto& v : per_stream) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  return all;
}

double studentized_range_upper_tail(const std::vector<double>& sorted_draws, double q) {
  if (sorted_draws.empty()) throw EvaluationError("no Monte Carlo draws");
  const auto it = std::lower_bound(sorted_draws.begin(), sorted_draws.end(), q);
  return static_cast<double>(sorted_draws.end() - it) / static_cast<double>(sorted_draws.size());
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, const TukeyConfig& cfg) {
  check_groups(groups);
  long n = 0;
  for (const auto& g : groups) n += static_cast<long>(g.size());
  const int k = static_cast<int>(groups.size());
  return tukey_hsd(groups, cfg, studentized_range_draws(k, static_cast<int>(n - k), cfg));
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, const TukeyConfig& cfg,
                      const std::vector<double>& draws) {
  const AnovaResult anova = one_way_anova(groups);
  const int k = static_cast<int>(groups.size());
  TukeyResult out;
  out.ms_within = anova.ms_within;
  out.df_within = anova.df_within;
  std::vector<double> means;
  for (const auto& g : groups) means.push_back(mean_of(g));
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      TukeyPair p;
      p.a = a;
      p.b = b;
      p.mean_diff = means[b] - means[a];
      const double se = std::sqrt(anova.ms_within / 2.0 *
                                  (1.0 / static_cast<double>(groups[a].size()) + 1.0 / static_cast<double>(groups[b].size())));
      const double diff = std::abs(p.mean_diff);
      if (anova.degenerate) {
        p.q = diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      } else {
        p.q = diff / se;
      }
      p.p = std::isinf(p.q) ? 0.0 : studentized_range_upper_tail(draws, p.q);
      p.significant = p.p < cfg.alpha;
      out.pairs.push_back(p);
    }
  }
  return out;
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw EvaluationError("quantile of an empty list");
  if (!(p >= 0.0 && p <= 1.0)) throw EvaluationError("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BoxplotStats boxplot_stats(const std::vector<double>& values) {
  if (values.empty()) throw EvaluationError("boxplot of an empty list");
  BoxplotStats s;
  s.q1 = quantile_type7(values, 0.25);
  s.median = quantile_type7(values, 0.5);
  s.q3 = quantile_type7(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  bool low_set = false;
  for (const double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
      continue;
    }
    if (!low_set) {
      s.whisker_low = v;
      low_set = true;
    }
    s.whisker_high = v;
  }
  return s;
}

}  // namespace ferx::eval
