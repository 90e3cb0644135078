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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ferx/eval/metrics.hpp"
#include "ferx/eval/stats.hpp"

namespace ferx::eval {

enum class Analysis { types, modality, all };

std::string_view analysis_name(Analysis a);
std::optional<Analysis> parse_analysis(std::string_view s);
std::vector<Cohort> analysis_cohorts(Analysis a);

enum class QualityRule { conjunction, disjunction, off };

struct EvaluateOptions {
  Analysis analysis = Analysis::modality;
  QualityRule quality = QualityRule::conjunction;
  TukeyConfig tukey;
  ScaleSpec scale;
};

struct MetricAnalysis {
  std::string metric;
  std::vector<Cohort> cohorts;  // groups with data, in analysis order
  std::vector<std::vector<double>> groups;
  std::vector<BoxplotStats> boxplots;
  std::optional<AnovaResult> anova;
  std::optional<TukeyResult> tukey;
  std::string skipped;  // reason when no test was run
};

struct CohortSummary {
  Cohort cohort = Cohort::cai;
  int participants = 0;
  double mean_hp = 0.0;
  double mean_hmp = 0.0;
  double mean_appropriate_trust = 0.0;
};

struct Report {
  Analysis analysis = Analysis::modality;
  int excluded_sessions = 0;
  std::vector<CohortSummary> cohorts;
  std::vector<MetricAnalysis> metrics;
};

// Throws EvaluationError when fewer than two analysed cohorts have data.
Report evaluate(const RecordSet& records, const EvaluateOptions& options);

std::string render_report_text(const Report& report);
std::string render_report_json(const Report& report);

}  // namespace ferx::eval
