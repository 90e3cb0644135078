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

#include "ferx/study/simulate.hpp"

#include <algorithm>
#include <memory>

namespace ferx::study {

namespace {

constexpr std::array<std::string_view, 3> kPolicyNames = {"oracle", "random", "always-agree"};

const StudyItem& test_item(const StudyBundle& b, const std::string& id) {
  const auto it = std::find_if(b.test.begin(), b.test.end(), [&](const StudyItem& s) { return s.id == id; });
  if (it == b.test.end()) throw std::logic_error("payload names unknown test item " + id);
  return *it;
}

std::string random_emotion(Rng& rng) { return std::string(kEmotionNames[rng.below(kSurveyEmotionCount)]); }

}  // namespace

std::string_view policy_name(Policy p) { return kPolicyNames[static_cast<int>(p)]; }

std::optional<Policy> parse_policy(std::string_view s) {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i] == s) return static_cast<Policy>(i);
  }
  return std::nullopt;
}

void run_participant(StudyService& service, const std::string& session, Policy policy, Rng& rng) {
  const StudyBundle& b = service.bundle();
  for (;;) {
    Json p;
    try {
      p = service.next(session);
    } catch (const StudyError& e) {
      if (e.code() == StudyErrc::done) return;
      throw;
    }
    const std::string phase = p["phase"].get<std::string>();
    if (phase == "training") continue;
    Json answer;
    const std::string question = p["question"].get<std::string>();
    if (question == "consent") {
      answer = "agree";
    } else if (question == "demographic") {
      const std::string kind = p["kind"].get<std::string>();
      if (kind == "integer") {
        const int lo = p["min"].get<int>(), hi = p["max"].get<int>();
        answer = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
      } else if (kind == "choice") {
        answer = p["options"][rng.below(p["options"].size())];
      } else {
        answer = "n/a";
      }
    } else if (question == "Q1" || question == "Q2") {
      const StudyItem& item = test_item(b, p["item"].get<std::string>());
      switch (policy) {
        case Policy::oracle: answer = emotion_name(question == "Q1" ? item.gt : item.mp); break;
        case Policy::always_agree: answer = emotion_name(item.gt); break;
        case Policy::random: answer = random_emotion(rng); break;
      }
    } else if (question == "attention") {
      const std::string id = p["item"].get<std::string>();
      const auto it =
          std::find_if(b.attention.begin(), b.attention.end(), [&](const AttentionItem& a) { return a.id == id; });
      answer = policy == Policy::random ? Json(it->options[rng.below(it->options.size())]) : Json(it->answer);
    } else {
      const int lo = p["min"].get<int>(), hi = p["max"].get<int>();
      answer = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    service.submit(session, Json{{"item", p["item"]}, {"question", question}, {"answer", answer}});
  }
}

Simulation simulate(const StudyBundle& bundle, const SimulateOptions& options) {
  Rng rng(options.seed);
  auto now = std::make_shared<std::int64_t>(1'700'000'000'000);
  auto timing = std::make_shared<Rng>(mix_seed(options.seed, 1));
  ServiceOptions so;
  so.secret = mix_seed(options.seed, 2);
  so.clock = [now, timing] {
    *now += 1500 + static_cast<std::int64_t>(timing->below(7500));
    return *now;
  };
  StudyService service(bundle, so);
  for (int i = 0; i < options.participants; ++i) {
    const std::string id = service.create_session(options.cohort)["session"].get<std::string>();
    run_participant(service, id, options.policy, rng);
  }
  return {service.log_snapshot(), service.export_records()};
}

}  // namespace ferx::study
