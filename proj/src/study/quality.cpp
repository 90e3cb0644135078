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

#include "ferx/study/quality.hpp"

#include <algorithm>

namespace ferx::study {

double median_duration(const std::vector<eval::SessionRecord>& sessions) {
  std::vector<double> d;
  for (const auto& s : sessions) {
    if (s.complete) d.push_back(static_cast<double>(s.duration_ms));
  }
  if (d.empty()) return 0.0;
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  return n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

QualitySplit quality_filter(const std::vector<eval::SessionRecord>& sessions, double median_duration_ms,
                            ExclusionRule rule) {
  QualitySplit out;
  for (const auto& s : sessions) {
    const bool fast = static_cast<double>(s.duration_ms) < median_duration_ms / 2.0;
    const bool failed_all = s.attention_total > 0 && s.attention_passed == 0;
    const bool drop = !s.complete || (rule == ExclusionRule::conjunction ? (fast && failed_all) : (fast || failed_all));
    (drop ? out.excluded : out.kept).push_back(s);
  }
  return out;
}

}  // namespace ferx::study
