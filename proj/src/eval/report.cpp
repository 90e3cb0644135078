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

#include "ferx/eval/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "ferx/study/quality.hpp"
#include "json.hpp"

namespace ferx::eval {

std::string_view analysis_name(Analysis a) {
  switch (a) {
    case Analysis::types: return "types";
    case Analysis::modality: return "modality";
    case Analysis::all: return "all";
  }
  return "?";
}

std::optional<Analysis> parse_analysis(std::string_view s) {
  for (const Analysis a : {Analysis::types, Analysis::modality, Analysis::all}) {
    if (analysis_name(a) == s) return a;
  }
  return std::nullopt;
}

std::vector<Cohort> analysis_cohorts(Analysis a) {
  switch (a) {
    case Analysis::types: return {Cohort::cai, Cohort::lime, Cohort::salmap, Cohort::shap, Cohort::fau_v};
    case Analysis::modality: return {Cohort::cai, Cohort::fau_t, Cohort::fau_v, Cohort::fau_vt};
    case Analysis::all: return {kAllCohorts.begin(), kAllCohorts.end()};
  }
  return {};
}

namespace {

using MetricFn = std::optional<double> (*)(const ParticipantMetrics&);

struct MetricDef {
  const char* name;
  MetricFn value;
};

constexpr MetricDef kMetrics[] = {
    {"hp_accuracy", [](const ParticipantMetrics& m) -> std::optional<double> { return m.hp_accuracy; }},
    {"hmp_accuracy", [](const ParticipantMetrics& m) -> std::optional<double> { return m.hmp_accuracy; }},
    {"appropriate_trust",
     [](const ParticipantMetrics& m) -> std::optional<double> { return static_cast<double>(m.appropriate_trust); }},
    {"trust_total",
     [](const ParticipantMetrics& m) -> std::optional<double> {
       if (!m.trust_total) return std::nullopt;
       return static_cast<double>(*m.trust_total);
     }},
    {"satisfaction_total",
     [](const ParticipantMetrics& m) -> std::optional<double> {
       if (!m.satisfaction_total) return std::nullopt;
       return static_cast<double>(*m.satisfaction_total);
     }},
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

Report evaluate(const RecordSet& records, const EvaluateOptions& options) {
  Report report;
  report.analysis = options.analysis;
  RecordSet used;
  if (records.sessions.empty() || options.quality == QualityRule::off) {
    used = records;
  } else {
    const auto rule = options.quality == QualityRule::conjunction ? study::ExclusionRule::conjunction
                                                                  : study::ExclusionRule::disjunction;
    const auto split = study::quality_filter(records.sessions, study::median_duration(records.sessions), rule);
    std::set<std::string> kept;
    for (const auto& s : split.kept) kept.insert(s.session);
    report.excluded_sessions = static_cast<int>(split.excluded.size());
    for (const auto& t : records.trials) {
      if (kept.count(t.session)) used.trials.push_back(t);
    }
    for (const auto& s : records.scales) {
      if (kept.count(s.session)) used.scales.push_back(s);
    }
    used.sessions = split.kept;
  }

  const std::vector<ParticipantMetrics> participants = participant_metrics(used, options.scale);
  const std::vector<Cohort> cohorts = analysis_cohorts(options.analysis);
  std::map<Cohort, std::vector<const ParticipantMetrics*>> by_cohort;
  for (const auto& p : participants) by_cohort[p.cohort].push_back(&p);

  std::string present;
  for (const Cohort c : cohorts) {
    const auto it = by_cohort.find(c);
    if (it == by_cohort.end()) continue;
    CohortSummary s;
    s.cohort = c;
    s.participants = static_cast<int>(it->second.size());
    std::vector<double> hp, hmp, at;
    for (const auto* m : it->second) {
      hp.push_back(m->hp_accuracy);
      hmp.push_back(m->hmp_accuracy);
      at.push_back(m->appropriate_trust);
    }
    s.mean_hp = mean(hp);
    s.mean_hmp = mean(hmp);
    s.mean_appropriate_trust = mean(at);
    report.cohorts.push_back(s);
    present += (present.empty() ? "" : ", ") + std::string(cohort_name(c));
  }
  if (report.cohorts.size() < 2) {
    throw EvaluationError("analysis '" + std::string(analysis_name(options.analysis)) +
                          "' needs at least 2 cohorts with data, found " +
                          (present.empty() ? std::string("none") : present));
  }

  std::map<std::pair<int, int>, std::vector<double>> draw_cache;
  for (const MetricDef& def : kMetrics) {
    MetricAnalysis ma;
    ma.metric = def.name;
    for (const Cohort c : cohorts) {
      const auto it = by_cohort.find(c);
      if (it == by_cohort.end()) continue;
      std::vector<double> values;
      for (const auto* m : it->second) {
        if (const auto v = def.value(*m)) values.push_back(*v);
      }
      if (values.empty()) continue;
      ma.cohorts.push_back(c);
      ma.boxplots.push_back(boxplot_stats(values));
      ma.groups.push_back(std::move(values));
    }
    bool testable = ma.groups.size() >= 2;
    for (const auto& g : ma.groups) testable = testable && g.size() >= 2;
    if (!testable) {
      ma.skipped = "needs at least 2 cohorts with 2 or more participants";
    } else {
      ma.anova = one_way_anova(ma.groups);
      const int k = static_cast<int>(ma.groups.size());
      const int df = ma.anova->df_within;
      auto& draws = draw_cache[{k, df}];
      if (draws.empty()) draws = studentized_range_draws(k, df, options.tukey);
      ma.tukey = tukey_hsd(ma.groups, options.tukey, draws);
    }
    report.metrics.push_back(std::move(ma));
  }
  return report;
}

std::string render_report_text(const Report& report) {
  std::string out = "evaluation report\n";
  out += "analysis: " + std::string(analysis_name(report.analysis)) + "\n";
  out += "excluded sessions: " + std::to_string(report.excluded_sessions) + "\n\n";
  out += "cohort     n    hp_acc   hmp_acc  appropriate_trust\n";
  for (const auto& c : report.cohorts) {
    char line[128];
    std::snprintf(line, sizeof line, "%-8s %4d  %7.4f  %7.4f  %7.3f\n", std::string(cohort_name(c.cohort)).c_str(),
                  c.participants, c.mean_hp, c.mean_hmp, c.mean_appropriate_trust);
    out += line;
  }
  for (const auto& m : report.metrics) {
    out += "\n[" + m.metric + "]\n";
    for (std::size_t g = 0; g < m.groups.size(); ++g) {
      const auto& b = m.boxplots[g];
      out += "  " + std::string(cohort_name(m.cohorts[g])) + " n=" + std::to_string(m.groups[g].size()) +
             " mean=" + fmt("%.4f", mean(m.groups[g])) + " q1=" + fmt("%.4f", b.q1) +
             " median=" + fmt("%.4f", b.median) + " q3=" + fmt("%.4f", b.q3) + " whiskers=[" +
             fmt("%.4f", b.whisker_low) + ", " + fmt("%.4f", b.whisker_high) + "] outliers=" +
             std::to_string(b.outliers.size()) + "\n";
    }
    if (!m.anova) {
      out += "  no test: " + m.skipped + "\n";
      continue;
    }
    const auto& a = *m.anova;
    out += "  ANOVA F(" + std::to_string(a.df_between) + ", " + std::to_string(a.df_within) +
           ") = " + fmt("%.2f", a.f) + ", p = " + fmt("%.3g", a.p) + (a.degenerate ? " (degenerate)" : "") + "\n";
    out += "  Tukey HSD:\n";
    for (const auto& p : m.tukey->pairs) {
      out += "    " + std::string(cohort_name(m.cohorts[p.a])) + " vs " + std::string(cohort_name(m.cohorts[p.b])) +
             ": diff=" + fmt("%.4f", p.mean_diff) + " q=" + fmt("%.3f", p.q) + " p=" + fmt("%.4f", p.p) +
             (p.significant ? " *" : "") + "\n";
    }
  }
  return out;
}

std::string render_report_json(const Report& report) {
  using Json = nlohmann::ordered_json;
  auto num = [](double v) -> Json { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json j;
  j["analysis"] = analysis_name(report.analysis);
  j["excluded_sessions"] = report.excluded_sessions;
  j["cohorts"] = Json::array();
  for (const auto& c : report.cohorts) {
    j["cohorts"].push_back({{"cohort", cohort_name(c.cohort)},
                            {"participants", c.participants},
                            {"mean_hp_accuracy", num(c.mean_hp)},
                            {"mean_hmp_accuracy", num(c.mean_hmp)},
                            {"mean_appropriate_trust", num(c.mean_appropriate_trust)}});
  }
  j["metrics"] = Json::array();
  for (const auto& m : report.metrics) {
    Json mj;
    mj["metric"] = m.metric;
    mj["groups"] = Json::array();
    for (std::size_t g = 0; g < m.groups.size(); ++g) {
      const auto& b = m.boxplots[g];
      Json outliers = Json::array();
      for (const double v : b.outliers) outliers.push_back(num(v));
      mj["groups"].push_back({{"cohort", cohort_name(m.cohorts[g])},
                              {"n", m.groups[g].size()},
                              {"mean", num(mean(m.groups[g]))},
                              {"q1", num(b.q1)},
                              {"median", num(b.median)},
                              {"q3", num(b.q3)},
                              {"whisker_low", num(b.whisker_low)},
                              {"whisker_high", num(b.whisker_high)},
                              {"outliers", outliers}});
    }
    if (m.anova) {
      const auto& a = *m.anova;
      mj["anova"] = {{"f", num(a.f)},         {"df_between", a.df_between}, {"df_within", a.df_within},
                     {"ss_between", num(a.ss_between)}, {"ss_within", num(a.ss_within)}, {"p", num(a.p)},
                     {"degenerate", a.degenerate}};
      Json pairs = Json::array();
      for (const auto& p : m.tukey->pairs) {
        pairs.push_back({{"a", cohort_name(m.cohorts[p.a])},
                         {"b", cohort_name(m.cohorts[p.b])},
                         {"mean_diff", num(p.mean_diff)},
                         {"q", num(p.q)},
                         {"p", num(p.p)},
                         {"significant", p.significant}});
      }
      mj["tukey"] = pairs;
    } else {
      mj["anova"] = nullptr;
      mj["tukey"] = nullptr;
      mj["skipped"] = m.skipped;
    }
    j["metrics"].push_back(std::move(mj));
  }
  return j.dump(2) + "\n";
}

}  // namespace ferx::eval
