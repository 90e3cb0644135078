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

#include <vector>

#include "ferx/eval/records.hpp"

namespace ferx::study {

enum class ExclusionRule {
  conjunction,  // fast AND failed every attention check
  disjunction,  // fast OR failed every attention check
};

struct QualitySplit {
  std::vector<eval::SessionRecord> kept;
  std::vector<eval::SessionRecord> excluded;
};

// Median duration of complete sessions; 0 when there are none.
double median_duration(const std::vector<eval::SessionRecord>& sessions);

// "Fast" means duration < median / 2. Incomplete sessions are excluded.
QualitySplit quality_filter(const std::vector<eval::SessionRecord>& sessions, double median_duration_ms,
                            ExclusionRule rule = ExclusionRule::conjunction);

}  // namespace ferx::study
