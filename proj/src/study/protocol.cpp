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

#include "ferx/study/protocol.hpp"

#include <algorithm>

#include "ferx/study/bundle.hpp"

namespace ferx::study {

namespace {

constexpr std::array<std::string_view, 6> kQuestionNames = {"consent", "demographic", "Q1", "Q2", "attention",
                                                            "scale-item"};
constexpr std::array<std::string_view, 3> kDemographicKinds = {"integer", "choice", "text"};

}  // namespace

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::consent: return "consent";
    case Phase::demographics: return "demographics";
    case Phase::training: return "training";
    case Phase::test: return "test";
    case Phase::scales: return "scales";
    case Phase::done: return "done";
  }
  return "";
}

std::string_view question_name(Question q) { return kQuestionNames[static_cast<int>(q)]; }

std::optional<Question> parse_question(std::string_view s) {
  for (std::size_t i = 0; i < kQuestionNames.size(); ++i) {
    if (kQuestionNames[i] == s) return static_cast<Question>(i);
  }
  return std::nullopt;
}

bool DemographicQuestion::accepts(const Json& answer) const {
  switch (kind) {
    case Kind::integer:
      return answer.is_number_integer() && answer.get<long long>() >= min && answer.get<long long>() <= max;
    case Kind::choice:
      return answer.is_string() &&
             std::find(options.begin(), options.end(), answer.get<std::string>()) != options.end();
    case Kind::text: {
      if (!answer.is_string()) return false;
      const auto& s = answer.get_ref<const std::string&>();
      return !s.empty() && s.size() <= 200;
    }
  }
  return false;
}

eval::ScaleSpec StudyConfig::scale_spec(eval::ScaleKind kind) const {
  const auto& items = kind == eval::ScaleKind::trust ? trust_items : satisfaction_items;
  return {static_cast<int>(items.size()), likert_min, likert_max, kind == eval::ScaleKind::trust ? reverse_item : 0};
}

StudyConfig default_config() {
  StudyConfig c;
  c.consent_text =
      "You are invited to take part in a study on how people understand an emotion recognition system. "
      "You will look at face images, answer two questions about each, and complete two short questionnaires. "
      "Participation is voluntary and you may stop at any time. Responses are stored without your name.";
  c.demographics = {
      {"age", "What is your age?", DemographicQuestion::Kind::integer, 18, 100, {}},
      {"gender",
       "What is your gender?",
       DemographicQuestion::Kind::choice,
       0,
       0,
       {"female", "male", "non-binary", "prefer not to say"}},
      {"country",
       "Which country do you live in?",
       DemographicQuestion::Kind::choice,
       0,
       0,
       {"Australia", "Canada", "United Kingdom", "United States", "other"}},
  };
  c.trust_items = {
      "I am confident in the emotion recognition system. I feel that it works well.",
      "The outputs of the emotion recognition system are very predictable.",
      "The emotion recognition system is very reliable. I can count on it to be correct all the time.",
      "I feel safe that when I rely on the emotion recognition system I will get the right answers.",
      "The emotion recognition system is efficient in that it works very quickly.",
      "I am wary of the emotion recognition system.",
      "The emotion recognition system can perform the task better than a novice human user.",
      "I like using the emotion recognition system for decision making.",
  };
  c.satisfaction_items = {
      "From the explanation, I understand how the emotion recognition system works.",
      "This explanation of how the emotion recognition system works is satisfying.",
      "This explanation of how the emotion recognition system works has sufficient detail.",
      "This explanation of how the emotion recognition system works seems complete.",
      "This explanation of how the emotion recognition system works tells me how to use it.",
      "This explanation of how the emotion recognition system works is useful to my goals.",
      "This explanation of the emotion recognition system shows me how accurate the system is.",
      "This explanation lets me judge when I should trust and not trust the emotion recognition system.",
  };
  return c;
}

Json config_to_json(const StudyConfig& c) {
  Json j;
  j["consent_text"] = c.consent_text;
  Json demo = Json::array();
  for (const auto& q : c.demographics) {
    Json d;
    d["id"] = q.id;
    d["prompt"] = q.prompt;
    d["kind"] = kDemographicKinds[static_cast<int>(q.kind)];
    if (q.kind == DemographicQuestion::Kind::integer) {
      d["min"] = q.min;
      d["max"] = q.max;
    }
    if (q.kind == DemographicQuestion::Kind::choice) d["options"] = q.options;
    demo.push_back(std::move(d));
  }
  j["demographics"] = std::move(demo);
  j["trust_items"] = c.trust_items;
  j["satisfaction_items"] = c.satisfaction_items;
  j["likert_min"] = c.likert_min;
  j["likert_max"] = c.likert_max;
  j["reverse_item"] = c.reverse_item;
  j["attention_positions"] = c.attention_positions;
  return j;
}

StudyConfig config_from_json(const Json& j) {
  try {
    StudyConfig c;
    c.consent_text = j.at("consent_text").get<std::string>();
    for (const auto& d : j.at("demographics")) {
      DemographicQuestion q;
      q.id = d.at("id").get<std::string>();
      q.prompt = d.at("prompt").get<std::string>();
      const auto kind = d.at("kind").get<std::string>();
      const auto it = std::find(kDemographicKinds.begin(), kDemographicKinds.end(), kind);
      if (it == kDemographicKinds.end()) throw BundleError("unknown demographic kind " + kind);
      q.kind = static_cast<DemographicQuestion::Kind>(it - kDemographicKinds.begin());
      if (q.kind == DemographicQuestion::Kind::integer) {
        q.min = d.at("min").get<int>();
        q.max = d.at("max").get<int>();
      }
      if (q.kind == DemographicQuestion::Kind::choice) q.options = d.at("options").get<std::vector<std::string>>();
      c.demographics.push_back(std::move(q));
    }
    c.trust_items = j.at("trust_items").get<std::vector<std::string>>();
    c.satisfaction_items = j.at("satisfaction_items").get<std::vector<std::string>>();
    c.likert_min = j.at("likert_min").get<int>();
    c.likert_max = j.at("likert_max").get<int>();
    c.reverse_item = j.at("reverse_item").get<int>();
    c.attention_positions = j.at("attention_positions").get<std::vector<int>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw BundleError(std::string("protocol: ") + e.what());
  }
}

}  // namespace ferx::study
