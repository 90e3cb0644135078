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

#include "ferx/core/random.hpp"
#include "ferx/study/service.hpp"

namespace ferx::study {

// oracle: Hgtp = GT, Hmp = MP. always-agree: Hgtp = Hmp = GT. random:
// uniform answers everywhere. The first two pass every attention check.
enum class Policy { oracle, random, always_agree };

std::string_view policy_name(Policy p);
std::optional<Policy> parse_policy(std::string_view s);

struct SimulateOptions {
  Policy policy = Policy::oracle;
  int participants = 7;
  std::uint64_t seed = 0;
  std::optional<Cohort> cohort;  // unset: balanced assignment
};

struct Simulation {
  std::string log;
  std::string export_jsonl;
};

// Drives one session from consent to done through the service API.
void run_participant(StudyService& service, const std::string& session, Policy policy, Rng& rng);

// In-memory service with a simulated clock, seeded by options.seed.
Simulation simulate(const StudyBundle& bundle, const SimulateOptions& options);

}  // namespace ferx::study
