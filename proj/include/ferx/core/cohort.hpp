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
#include <string_view>

namespace ferx {

// Between-subject conditions, in their fixed tie-break order.
enum class Cohort : int { cai = 0, lime, salmap, shap, fau_t, fau_v, fau_vt };

inline constexpr int kCohortCount = 7;

inline constexpr std::array<Cohort, kCohortCount> kAllCohorts = {
    Cohort::cai, Cohort::lime, Cohort::salmap, Cohort::shap, Cohort::fau_t, Cohort::fau_v, Cohort::fau_vt};

inline constexpr std::array<std::string_view, kCohortCount> kCohortNames = {"CAI",   "LIME",  "SALMAP", "SHAP",
                                                                            "FAU-T", "FAU-V", "FAU-VT"};

constexpr std::string_view cohort_name(Cohort c) { return kCohortNames[static_cast<int>(c)]; }

// "CONTROL" is accepted as another name for CAI.
inline std::optional<Cohort> parse_cohort(std::string_view s) {
  if (s == "CONTROL") return Cohort::cai;
  for (int i = 0; i < kCohortCount; ++i) {
    if (kCohortNames[i] == s) return static_cast<Cohort>(i);
  }
  return std::nullopt;
}

constexpr bool has_explanation(Cohort c) { return c != Cohort::cai; }
constexpr bool shows_text(Cohort c) { return c == Cohort::fau_t || c == Cohort::fau_vt; }
constexpr bool shows_image(Cohort c) { return c != Cohort::cai && c != Cohort::fau_t; }

}  // namespace ferx
