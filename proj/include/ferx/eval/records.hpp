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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ferx/core/cohort.hpp"
#include "ferx/core/emotion.hpp"

namespace ferx::eval {

class EvaluationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One answered test trial. Labels are survey emotions.
struct TrialRecord {
  std::string session;
  Cohort cohort = Cohort::cai;
  int trial = 0;
  std::string image;
  Emotion gt = Emotion::neutral;
  Emotion mp = Emotion::neutral;
  Emotion hgtp = Emotion::neutral;
  Emotion hmp = Emotion::neutral;
  std::int64_t rt_ms = 0;

  bool operator==(const TrialRecord&) const = default;
};

enum class ScaleKind { trust, satisfaction };

std::string_view scale_name(ScaleKind k);

struct ScaleResponse {
  std::string session;
  Cohort cohort = Cohort::cai;
  ScaleKind kind = ScaleKind::trust;
  std::vector<int> items;

  bool operator==(const ScaleResponse&) const = default;
};

// Per-session summary written by the study service.
struct SessionRecord {
  std::string session;
  Cohort cohort = Cohort::cai;
  bool complete = false;
  std::int64_t duration_ms = 0;
  int attention_passed = 0;
  int attention_total = 0;

  bool operator==(const SessionRecord&) const = default;
};

struct RecordSet {
  std::vector<TrialRecord> trials;
  std::vector<ScaleResponse> scales;
  std::vector<SessionRecord> sessions;
};

// One JSON object per line with a fixed key order.
std::string to_jsonl(const TrialRecord& r);
std::string to_jsonl(const ScaleResponse& r);
std::string to_jsonl(const SessionRecord& r);

// Errors name the offending line number.
RecordSet parse_records(std::string_view text);

}  // namespace ferx::eval
