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

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>

#include "ferx/core/random.hpp"
#include "ferx/eval/metrics.hpp"
#include "ferx/eval/records.hpp"
#include "ferx/eval/report.hpp"
#include "ferx/eval/stats.hpp"
#include "ferx/study/quality.hpp"

namespace ferx::eval {
namespace {

Emotion emo(int i) { return static_cast<Emotion>(i); }

TrialRecord trial(int gt, int mp, int hgtp, int hmp) {
  TrialRecord r;
  r.session = "S1";
  r.image = "img";
  r.gt = emo(gt);
  r.mp = emo(mp);
  r.hgtp = emo(hgtp);
  r.hmp = emo(hmp);
  return r;
}

TrialRecord random_trial(Rng& rng) {
  return trial(static_cast<int>(rng.below(7)), static_cast<int>(rng.below(7)), static_cast<int>(rng.below(7)),
               static_cast<int>(rng.below(7)));
}

ScaleResponse scale(ScaleKind kind, std::vector<int> items) {
  ScaleResponse r;
  r.kind = kind;
  r.items = std::move(items);
  return r;
}

const std::vector<std::vector<double>> kFixture = {{1, 2, 3}, {2, 3, 4}, {6, 7, 8}};

TEST(Accuracy, HpCounts) {
  std::vector<TrialRecord> all(28, trial(1, 2, 1, 3));
  EXPECT_EQ(hp_accuracy(all), 1.0);
  std::vector<TrialRecord> none(28, trial(1, 2, 2, 3));
  EXPECT_EQ(hp_accuracy(none), 0.0);
  std::vector<TrialRecord> mixed;
  for (int i = 0; i < 28; ++i) mixed.push_back(trial(1, 2, i < 21 ? 1 : 4, 0));
  EXPECT_EQ(hp_accuracy(mixed), 0.75);
  EXPECT_THROW(hp_accuracy(std::vector<TrialRecord>{}), EvaluationError);
}

TEST(Accuracy, HmpCounts) {
  std::vector<TrialRecord> all(28, trial(1, 2, 1, 2));
  EXPECT_EQ(hmp_accuracy(all), 1.0);
  std::vector<TrialRecord> alt, fixture;
  for (int i = 0; i < 28; ++i) {
    alt.push_back(trial(0, 5, 0, i % 2 ? 5 : 6));
    fixture.push_back(trial(0, 5, 0, i < 19 ? 5 : 3));
  }
  EXPECT_EQ(hmp_accuracy(alt), 0.5);
  EXPECT_DOUBLE_EQ(hmp_accuracy(fixture), 19.0 / 28.0);
  EXPECT_THROW(hmp_accuracy(std::vector<TrialRecord>{}), EvaluationError);
}

TEST(Accuracy, PermutationInvariantAndBounded) {
  Rng rng(1);
  for (int trial_no = 0; trial_no < 50; ++trial_no) {
    std::vector<TrialRecord> v;
    for (int i = 0; i < 28; ++i) v.push_back(random_trial(rng));
    const double hp = hp_accuracy(v), hmp = hmp_accuracy(v);
    EXPECT_GE(hp, 0.0);
    EXPECT_LE(hp, 1.0);
    rng.shuffle(std::span<TrialRecord>(v));
    EXPECT_EQ(hp_accuracy(v), hp);
    EXPECT_EQ(hmp_accuracy(v), hmp);
  }
}

// Case (a): GT == MP and Hgtp == Hmp. Case (b): GT != MP and Hgtp != Hmp.
TEST(AppropriateTrust, TruthTable) {
  EXPECT_EQ(appropriate_trust(std::vector{trial(1, 1, 2, 2)}), 1);
  EXPECT_EQ(appropriate_trust(std::vector{trial(1, 1, 2, 3)}), 0);
  EXPECT_EQ(appropriate_trust(std::vector{trial(1, 4, 2, 2)}), 0);
  EXPECT_EQ(appropriate_trust(std::vector{trial(1, 4, 2, 3)}), 1);
  // Every labelling over four emotions, against the definition written out.
  for (int gt = 0; gt < 4; ++gt) {
    for (int mp = 0; mp < 4; ++mp) {
      for (int h1 = 0; h1 < 4; ++h1) {
        for (int h2 = 0; h2 < 4; ++h2) {
          const bool a = gt == mp && h1 == h2;
          const bool b = gt != mp && h1 != h2;
          EXPECT_EQ(appropriate_trust(std::vector{trial(gt, mp, h1, h2)}), (a || b) ? 1 : 0);
        }
      }
    }
  }
  EXPECT_THROW(appropriate_trust(std::vector<TrialRecord>{}), EvaluationError);
}

TEST(AppropriateTrust, InvariantUnderRelabeling) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<TrialRecord> v;
    for (int i = 0; i < 28; ++i) v.push_back(random_trial(rng));
    std::array<int, 7> perm;
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<int>(perm));
    std::vector<TrialRecord> relabeled = v;
    for (auto& r : relabeled) {
      r.gt = emo(perm[static_cast<int>(r.gt)]);
      r.mp = emo(perm[static_cast<int>(r.mp)]);
      r.hgtp = emo(perm[static_cast<int>(r.hgtp)]);
      r.hmp = emo(perm[static_cast<int>(r.hmp)]);
    }
    EXPECT_EQ(appropriate_trust(relabeled), appropriate_trust(v));
  }
}

TEST(Scales, TrustTotalDeductsItemSix) {
  EXPECT_EQ(trust_scale_total(scale(ScaleKind::trust, {3, 3, 3, 3, 3, 3, 3, 3})), 18);
  EXPECT_EQ(trust_scale_total(scale(ScaleKind::trust, {5, 5, 5, 5, 5, 1, 5, 5})), 34);
  EXPECT_EQ(trust_scale_total(scale(ScaleKind::trust, {1, 1, 1, 1, 1, 5, 1, 1})), 2);
}

TEST(Scales, SatisfactionIsPlainSum) {
  EXPECT_EQ(satisfaction_total(scale(ScaleKind::satisfaction, std::vector<int>(8, 1))), 8);
  EXPECT_EQ(satisfaction_total(scale(ScaleKind::satisfaction, std::vector<int>(8, 5))), 40);
  EXPECT_EQ(satisfaction_total(scale(ScaleKind::satisfaction, {1, 2, 3, 4, 5, 4, 3, 2})), 24);
}

TEST(Scales, RejectInvalidResponses) {
  EXPECT_THROW(trust_scale_total(scale(ScaleKind::trust, {3, 3, 3, 3, 3, 6, 3, 3})), EvaluationError);
  EXPECT_THROW(trust_scale_total(scale(ScaleKind::trust, {3, 3, 3, 0, 3, 3, 3, 3})), EvaluationError);
  EXPECT_THROW(satisfaction_total(scale(ScaleKind::satisfaction, {3, 3, 3})), EvaluationError);
  ScaleSpec seven{7, 1, 7, 6};
  EXPECT_EQ(trust_scale_total(scale(ScaleKind::trust, {7, 7, 7, 7, 7, 1, 7}), seven), 41);
}

TEST(IncompleteBeta, MatchesBoost) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double a = 0.2 + 60.0 * rng.uniform01();
    const double b = 0.2 + 60.0 * rng.uniform01();
    const double x = rng.uniform01();
    EXPECT_NEAR(regularized_incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12)
        << a << " " << b << " " << x;
  }
}

TEST(FDistribution, UpperTailMatchesBoost) {
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const int d1 = 1 + static_cast<int>(rng.below(10));
    const int d2 = 1 + static_cast<int>(rng.below(300));
    const double f = 20.0 * rng.uniform01() * rng.uniform01();
    const boost::math::fisher_f dist(d1, d2);
    EXPECT_NEAR(f_upper_tail(f, d1, d2), boost::math::cdf(boost::math::complement(dist, f)), 1e-10);
  }
  EXPECT_EQ(f_upper_tail(0.0, 2, 6), 1.0);
}

TEST(Anova, HandComputedFixture) {
  const AnovaResult r = one_way_anova(kFixture);
  EXPECT_NEAR(r.f, 21.0, 1e-9);
  EXPECT_EQ(r.df_between, 2);
  EXPECT_EQ(r.df_within, 6);
  EXPECT_NEAR(r.ss_between, 42.0, 1e-12);
  EXPECT_NEAR(r.ss_within, 6.0, 1e-12);
  const boost::math::fisher_f dist(2, 6);
  EXPECT_NEAR(r.p, boost::math::cdf(boost::math::complement(dist, 21.0)), 1e-12);
  EXPECT_FALSE(r.degenerate);
}

TEST(Anova, IdenticalGroups) {
  const AnovaResult r = one_way_anova({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  EXPECT_EQ(r.f, 0.0);
  EXPECT_EQ(r.p, 1.0);
}

TEST(Anova, ZeroVarianceIsFlagged) {
  const AnovaResult same = one_way_anova({{2, 2}, {2, 2}});
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.f, 0.0);
  EXPECT_EQ(same.p, 1.0);
  const AnovaResult apart = one_way_anova({{2, 2}, {5, 5}});
  EXPECT_TRUE(apart.degenerate);
  EXPECT_TRUE(std::isinf(apart.f));
  EXPECT_EQ(apart.p, 0.0);
}

TEST(Anova, RejectsSmallInputs) {
  EXPECT_THROW(one_way_anova({{1, 2, 3}}), EvaluationError);
  EXPECT_THROW(one_way_anova({{1, 2, 3}, {4}}), EvaluationError);
}

TEST(Anova, TwoGroupsMatchPooledTTest) {
  Rng rng(5);
  for (int trial_no = 0; trial_no < 50; ++trial_no) {
    std::vector<double> a(2 + rng.below(20)), b(2 + rng.below(20));
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = 0.5 + rng.normal();
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double ss = 0.0;
    for (const double v : a) ss += (v - ma) * (v - ma);
    for (const double v : b) ss += (v - mb) * (v - mb);
    const double df = static_cast<double>(a.size() + b.size() - 2);
    const double sp2 = ss / df;
    const double t = (ma - mb) / std::sqrt(sp2 * (1.0 / a.size() + 1.0 / b.size()));
    const boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    const AnovaResult r = one_way_anova({a, b});
    EXPECT_NEAR(r.f, t * t, 1e-9 * std::max(1.0, t * t));
    EXPECT_NEAR(r.p, p, 1e-9);
  }
}

TEST(Anova, InvariantUnderShiftAndScale) {
  Rng rng(6);
  for (int trial_no = 0; trial_no < 30; ++trial_no) {
    std::vector<std::vector<double>> g(2 + rng.below(4));
    for (auto& grp : g) {
      grp.resize(2 + rng.below(10));
      for (auto& v : grp) v = rng.normal() + 0.3 * static_cast<double>(&grp - g.data());
    }
    const AnovaResult base = one_way_anova(g);
    const double shift = 100.0 * rng.normal();
    double c = 0.0;
    while (std::abs(c) < 0.01) c = 10.0 * rng.normal();
    auto shifted = g, scaled = g;
    for (auto& grp : shifted) {
      for (auto& v : grp) v += shift;
    }
    for (auto& grp : scaled) {
      for (auto& v : grp) v *= c;
    }
    EXPECT_NEAR(one_way_anova(shifted).f, base.f, 1e-7 * std::max(1.0, base.f));
    EXPECT_NEAR(one_way_anova(scaled).f, base.f, 1e-9 * std::max(1.0, base.f));
  }
}

TEST(Tukey, FixtureFlagsExtremePair) {
  const TukeyResult r = tukey_hsd(kFixture);
  ASSERT_EQ(r.pairs.size(), 3u);
  EXPECT_EQ(r.df_within, 6);
  // q = |diff| / sqrt(MSW / n) with MSW = 1, n = 3.
  EXPECT_NEAR(r.pairs[0].q, 1.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(r.pairs[1].q, 5.0 * std::sqrt(3.0), 1e-12);
  EXPECT_GT(r.pairs[1].q, 4.34);
  EXPECT_TRUE(r.pairs[1].significant);
  EXPECT_FALSE(r.pairs[0].significant);
  EXPECT_TRUE(r.pairs[2].significant);
}

TEST(Tukey, IdenticalGroupsHaveNoDifferences) {
  const TukeyResult r = tukey_hsd({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  for (const auto& p : r.pairs) {
    EXPECT_EQ(p.q, 0.0);
    EXPECT_FALSE(p.significant);
  }
}

struct CriticalValue {
  int k;
  int df;
  double q;
  double alpha;
};

// Published studentized-range critical values.
TEST(Tukey, MonteCarloMatchesTables) {
  const CriticalValue table[] = {
      {3, 6, 4.339, 0.05}, {2, 10, 3.151, 0.05}, {4, 20, 3.958, 0.05}, {5, 30, 4.102, 0.05}, {3, 6, 6.331, 0.01},
  };
  for (const auto& c : table) {
    const auto draws = studentized_range_draws(c.k, c.df, {});
    EXPECT_NEAR(studentized_range_upper_tail(draws, c.q), c.alpha, 0.005) << c.k << " " << c.df;
  }
}

// With two groups q / sqrt(2) is |t| on df degrees of freedom.
TEST(Tukey, TwoGroupsAgreeWithTDistribution) {
  const auto draws = studentized_range_draws(2, 12, {});
  const boost::math::students_t dist(12);
  for (const double t : {0.5, 1.0, 2.0, 3.0}) {
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    EXPECT_NEAR(studentized_range_upper_tail(draws, t * std::sqrt(2.0)), p, 0.003);
  }
}

TEST(Tukey, ReproducibleAcrossRunsAndThreads) {
  TukeyConfig cfg;
  cfg.draws = 200'000;
  const auto a = studentized_range_draws(4, 9, cfg);
  const auto b = studentized_range_draws(4, 9, cfg);
  cfg.threads = 4;
  const auto c = studentized_range_draws(4, 9, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  cfg.seed += 1;
  EXPECT_NE(studentized_range_draws(4, 9, cfg), a);
}

TEST(Boxplot, TypeSevenQuartiles) {
  const BoxplotStats s = boxplot_stats({9, 1, 8, 2, 7, 3, 6, 4, 5});
  EXPECT_DOUBLE_EQ(s.q1, 3.0);
  EXPECT_DOUBLE_EQ(s.median, 5.0);
  EXPECT_DOUBLE_EQ(s.q3, 7.0);
  EXPECT_TRUE(s.outliers.empty());
  EXPECT_DOUBLE_EQ(s.whisker_low, 1.0);
  EXPECT_DOUBLE_EQ(s.whisker_high, 9.0);
  EXPECT_DOUBLE_EQ(quantile_type7({1, 2, 3, 4}, 0.25), 1.75);
}

TEST(Boxplot, ConstantList) {
  const BoxplotStats s = boxplot_stats({4, 4, 4, 4});
  EXPECT_EQ(s.q1, 4.0);
  EXPECT_EQ(s.median, 4.0);
  EXPECT_EQ(s.q3, 4.0);
  EXPECT_TRUE(s.outliers.empty());
}

TEST(Boxplot, FlagsFarOutlier) {
  // q1 = 1.75, q3 = 27.25, upper fence 65.5.
  const BoxplotStats s = boxplot_stats({1, 2, 3, 100});
  ASSERT_EQ(s.outliers.size(), 1u);
  EXPECT_EQ(s.outliers[0], 100.0);
  EXPECT_EQ(s.whisker_high, 3.0);
  EXPECT_THROW(boxplot_stats({}), EvaluationError);
}

TEST(Records, JsonLinesRoundTrip) {
  RecordSet set;
  TrialRecord t = trial(1, 2, 3, 4);
  t.cohort = Cohort::fau_vt;
  t.trial = 7;
  t.rt_ms = 1234;
  set.trials.push_back(t);
  ScaleResponse s = scale(ScaleKind::trust, {1, 2, 3, 4, 5, 4, 3, 2});
  s.session = "S1";
  s.cohort = Cohort::fau_vt;
  set.scales.push_back(s);
  SessionRecord sr{"S1", Cohort::fau_vt, true, 60000, 2, 2};
  set.sessions.push_back(sr);
  const std::string text = to_jsonl(t) + "\n" + to_jsonl(s) + "\n" + to_jsonl(sr) + "\n";
  EXPECT_EQ(to_jsonl(t),
            R"({"type":"trial","session":"S1","cohort":"FAU-VT","trial":7,"image":"img","gt":"anger",)"
            R"("mp":"sadness","hgtp":"happiness","hmp":"fear","rt_ms":1234})");
  const RecordSet back = parse_records(text);
  EXPECT_EQ(back.trials, set.trials);
  EXPECT_EQ(back.scales, set.scales);
  EXPECT_EQ(back.sessions, set.sessions);
}

TEST(Records, ErrorsNameTheLine) {
  const std::string good = to_jsonl(trial(1, 2, 3, 4));
  try {
    parse_records(good + "\n{\"type\":\"trial\"\n");
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::string bad_cohort = good;
  bad_cohort.replace(bad_cohort.find("CAI"), 3, "XAI");
  EXPECT_THROW(parse_records(bad_cohort), EvaluationError);
  std::string contempt = good;
  contempt.replace(contempt.find("\"anger\""), 7, "\"contempt\"");
  EXPECT_THROW(parse_records(contempt), EvaluationError);
}

TEST(QualityFilter, ConjunctionRule) {
  const std::vector<SessionRecord> s = {
      {"A", Cohort::cai, true, 10, 2, 2},   // fast, passed
      {"B", Cohort::cai, true, 10, 0, 2},   // fast, failed both
      {"C", Cohort::cai, true, 100, 0, 2},  // slow, failed both
      {"D", Cohort::cai, true, 100, 1, 2},
      {"E", Cohort::cai, true, 100, 2, 2},
  };
  const double median = study::median_duration(s);
  EXPECT_EQ(median, 100.0);
  const auto split = study::quality_filter(s, median);
  ASSERT_EQ(split.excluded.size(), 1u);
  EXPECT_EQ(split.excluded[0].session, "B");
  const auto either = study::quality_filter(s, median, study::ExclusionRule::disjunction);
  EXPECT_EQ(either.excluded.size(), 3u);
}

RecordSet cohort_records(Rng& rng, std::initializer_list<Cohort> cohorts, int per_cohort) {
  RecordSet set;
  int id = 0;
  for (const Cohort c : cohorts) {
    for (int p = 0; p < per_cohort; ++p) {
      const std::string session = "S" + std::to_string(id++);
      for (int i = 0; i < 28; ++i) {
        TrialRecord t = random_trial(rng);
        t.session = session;
        t.cohort = c;
        t.trial = i;
        set.trials.push_back(t);
      }
      ScaleResponse s = scale(ScaleKind::trust, std::vector<int>(8, 1 + static_cast<int>(rng.below(5))));
      s.session = session;
      s.cohort = c;
      set.scales.push_back(s);
    }
  }
  return set;
}

TEST(Evaluate, NeedsTwoCohorts) {
  Rng rng(7);
  EvaluateOptions opt;
  opt.tukey.draws = 20'000;
  EXPECT_THROW(evaluate(cohort_records(rng, {Cohort::fau_vt}, 5), opt), EvaluationError);
  EXPECT_THROW(evaluate(cohort_records(rng, {Cohort::lime, Cohort::shap}, 5), opt), EvaluationError);
  const Report r = evaluate(cohort_records(rng, {Cohort::cai, Cohort::fau_vt, Cohort::lime}, 5), opt);
  EXPECT_EQ(r.cohorts.size(), 2u);
  ASSERT_EQ(r.metrics.size(), 5u);
  EXPECT_TRUE(r.metrics[1].anova.has_value());
  EXPECT_FALSE(r.metrics[4].anova.has_value());
}

TEST(Evaluate, ReportIsDeterministic) {
  Rng rng(8);
  const RecordSet set = cohort_records(rng, {Cohort::cai, Cohort::fau_t, Cohort::fau_v, Cohort::fau_vt}, 4);
  EvaluateOptions opt;
  opt.tukey.draws = 50'000;
  const Report a = evaluate(set, opt);
  const Report b = evaluate(set, opt);
  EXPECT_EQ(render_report_json(a), render_report_json(b));
  EXPECT_EQ(render_report_text(a), render_report_text(b));
  EXPECT_NE(render_report_text(a).find("ANOVA F(3, 12)"), std::string::npos) << render_report_text(a);
}

}  // namespace
}  // namespace ferx::eval
