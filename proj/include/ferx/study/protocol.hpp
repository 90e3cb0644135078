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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ferx/eval/metrics.hpp"
#include "ferx/eval/records.hpp"
#include "json.hpp"

namespace ferx::study {

using Json = nlohmann::ordered_json;

enum class Phase { consent, demographics, training, test, scales, done };

std::string_view phase_name(Phase p);

enum class Question { consent, demographic, q1, q2, attention, scale_item };

std::string_view question_name(Question q);  // "consent", "demographic", "Q1", "Q2", "attention", "scale-item"
std::optional<Question> parse_question(std::string_view s);

struct DemographicQuestion {
  enum class Kind { integer, choice, text };
  std::string id;
  std::string prompt;
  Kind kind = Kind::text;
  int min = 0;  // integer bounds, inclusive
  int max = 0;
  std::vector<std::string> options;  // choice only

  bool accepts(const Json& answer) const;
};

struct StudyConfig {
  std::string consent_text;
  std::vector<DemographicQuestion> demographics;
  std::vector<std::string> trust_items;
  std::vector<std::string> satisfaction_items;
  int likert_min = 1;
  int likert_max = 5;
  int reverse_item = 6;  // trust item deducted from the total, 1-based
  // 1-based positions of the attention checks among the test slots.
  std::vector<int> attention_positions = {10, 20};

  eval::ScaleSpec scale_spec(eval::ScaleKind kind) const;
};

// Age 18-100, gender, country; 8-item trust and satisfaction scales.
StudyConfig default_config();

Json config_to_json(const StudyConfig& c);
StudyConfig config_from_json(const Json& j);

}  // namespace ferx::study
