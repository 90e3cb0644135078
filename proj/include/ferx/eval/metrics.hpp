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
#include <span>
#include <string>
#include <vector>

#include "ferx/eval/records.hpp"

namespace ferx::eval {

// count(Hgtp == GT) / N
double hp_accuracy(std::span<const TrialRecord> records);
// count(Hmp == MP) / N
double hmp_accuracy(std::span<const TrialRecord> records);

// Appropriate when the participant matches Q1 and Q2 exactly on the trials
// the model gets right.
constexpr bool is_appropriate(bool model_correct, bool answers_agree) { return model_correct == answers_agree; }

int appropriate_trust(std::span<const TrialRecord> records);

// Likert instrument shape; item numbers are 1-based.
struct ScaleSpec {
  int items = 8;
  int min = 1;
  int max = 5;
  int reverse_item = 6;
};

void validate_scale(const ScaleResponse& r, const ScaleSpec& spec = {});

// Sum of all items except the reverse item, minus the reverse item.
int trust_scale_total(const ScaleResponse& r, const ScaleSpec& spec = {});
int satisfaction_total(const ScaleResponse& r, const ScaleSpec& spec = {});

struct ParticipantMetrics {
  std::string session;
  Cohort cohort = Cohort::cai;
  int trials = 0;
  double hp_accuracy = 0.0;
  double hmp_accuracy = 0.0;
  int appropriate_trust = 0;
  std::optional<int> trust_total;
  std::optional<int> satisfaction_total;
};

// One entry per session with at least one trial, ordered by session id.
std::vector<ParticipantMetrics> participant_metrics(const RecordSet& records, const ScaleSpec& spec = {});

}  // namespace ferx::eval
