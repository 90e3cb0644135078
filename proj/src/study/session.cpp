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

#include "ferx/study/session.hpp"

#include <algorithm>
#include <numeric>

#include "ferx/core/random.hpp"

namespace ferx::study {

namespace {

constexpr std::array<std::string_view, 3> kEventNames = {"created", "served", "answer"};
constexpr std::string_view kQ1Prompt = "What emotion is this person displaying?";
constexpr std::string_view kQ2Prompt = "What emotion will the AI model predict?";

std::string asset_url(const std::string& name, int scale) {
  if (scale == 1) return "/assets/" + name;
  const auto dot = name.rfind('.');
  const std::string stem = dot == std::string::npos ? name : name.substr(0, dot);
  const std::string ext = dot == std::string::npos ? "" : name.substr(dot);
  return "/assets/" + stem + "@" + std::to_string(scale) + "x" + ext;
}

Json survey_options() {
  Json j = Json::array();
  for (int e = 0; e < kSurveyEmotionCount; ++e) j.push_back(kEmotionNames[e]);
  return j;
}


}  // namespace

std::string_view errc_name(StudyErrc c) {
  switch (c) {
    case StudyErrc::not_found: return "not_found";
    case StudyErrc::bad_request: return "bad_request";
    case StudyErrc::duplicate: return "duplicate";
    case StudyErrc::stale: return "stale";
    case StudyErrc::sequencing: return "sequencing";
    case StudyErrc::out_of_domain: return "out_of_domain";
    case StudyErrc::done: return "done";
    case StudyErrc::unauthorized: return "unauthorized";
    case StudyErrc::corrupt_log: return "corrupt_log";
  }
  return "";
}

std::string event_to_json(const Event& e) {
  Json j;
  j["seq"] = e.seq;
  j["time_ms"] = e.time_ms;
  j["session"] = e.session;
  j["type"] = kEventNames[static_cast<int>(e.type)];
  switch (e.type) {
    case EventType::created: j["cohort"] = cohort_name(e.cohort); break;
    case EventType::served: j["item"] = e.item; break;
    case EventType::answer:
      j["item"] = e.item;
      j["question"] = question_name(e.question);
      j["answer"] = e.answer;
      break;
  }
  return j.dump();
}

Event event_from_json(std::string_view line) {
  auto bad = [](const std::string& why) { return StudyError(StudyErrc::corrupt_log, why); };
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw bad("not JSON");
  }
  try {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.time_ms = j.at("time_ms").get<std::int64_t>();
    e.session = j.at("session").get<std::string>();
    const auto type = j.at("type").get<std::string>();
    const auto it = std::find(kEventNames.begin(), kEventNames.end(), type);
    if (it == kEventNames.end()) throw bad("unknown event type " + type);
    e.type = static_cast<EventType>(it - kEventNames.begin());
    if (e.type == EventType::created) {
      const auto c = parse_cohort(j.at("cohort").get<std::string>());
      if (!c) throw bad("unknown cohort");
      e.cohort = *c;
    } else {
      e.item = j.at("item").get<std::string>();
    }
    if (e.type == EventType::answer) {
      const auto q = parse_question(j.at("question").get<std::string>());
      if (!q) throw bad("unknown question");
      e.question = *q;
      e.answer = j.at("answer");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw bad(ex.what());
  }
}

std::vector<Slot> trial_order(const StudyBundle& bundle, std::uint64_t seed) {
  std::vector<int> tests(bundle.test.size());
  std::iota(tests.begin(), tests.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<int>(tests));
  const auto& positions = bundle.protocol.attention_positions;
  const int total = static_cast<int>(bundle.test.size() + bundle.attention.size());
  std::vector<Slot> order;
  std::size_t next_test = 0, next_attention = 0;
  for (int pos = 1; pos <= total; ++pos) {
    if (next_attention < positions.size() && positions[next_attention] == pos) {
      order.push_back({SlotKind::attention, static_cast<int>(next_attention++)});
    } else {
      order.push_back({SlotKind::test, tests[next_test++]});
    }
  }
  return order;
}

std::uint64_t session_seed(std::uint64_t secret, std::string_view session_id) {
  return mix_seed(secret, hash_bytes(session_id));
}

Session::Session(const StudyBundle& bundle, std::string id, Cohort cohort, std::uint64_t seed,
                 std::int64_t created_ms)
    : bundle_(&bundle),
      id_(std::move(id)),
      cohort_(cohort),
      order_(trial_order(bundle, seed)),
      created_ms_(created_ms),
      last_ms_(created_ms) {}

std::vector<eval::ScaleKind> Session::scales() const {
  if (has_explanation(cohort_)) return {eval::ScaleKind::trust, eval::ScaleKind::satisfaction};
  return {eval::ScaleKind::trust};
}

std::string Session::current_item() const {
  const StudyConfig& p = bundle_->protocol;
  switch (phase_) {
    case Phase::consent: return "consent";
    case Phase::demographics: return "demo-" + p.demographics[demographic_cursor_].id;
    case Phase::training:
      if (training_cursor_ < static_cast<int>(bundle_->training.size())) return bundle_->training[training_cursor_].id;
      [[fallthrough]];
    case Phase::test: {
      const Slot& s = order_[slot_cursor_];
      return s.kind == SlotKind::test ? bundle_->test[s.index].id : bundle_->attention[s.index].id;
    }
    case Phase::scales:
      return std::string(eval::scale_name(scales()[scale_index_])) + "-" + std::to_string(scale_item_ + 1);
    case Phase::done: return "";
  }
  return "";
}

std::optional<Event> Session::serve_event(std::int64_t now) const {
  if (phase_ == Phase::done) throw StudyError(StudyErrc::done, "session " + id_ + " is finished");
  if (phase_ != Phase::training && phase_ != Phase::test) return std::nullopt;
  const std::string item = current_item();
  if (phase_ == Phase::test && served_.count(item)) return std::nullopt;
  Event e;
  e.time_ms = now;
  e.session = id_;
  e.type = EventType::served;
  e.item = item;
  return e;
}

std::optional<std::pair<std::string, Question>> Session::expected() const {
  switch (phase_) {
    case Phase::consent: return std::pair{current_item(), Question::consent};
    case Phase::demographics: return std::pair{current_item(), Question::demographic};
    case Phase::training:
    case Phase::done: return std::nullopt;
    case Phase::test: {
      const std::string item = current_item();
      if (order_[slot_cursor_].kind == SlotKind::attention) return std::pair{item, Question::attention};
      return std::pair{item, answers_.count({item, Question::q1}) ? Question::q2 : Question::q1};
    }
    case Phase::scales: return std::pair{current_item(), Question::scale_item};
  }
  return std::nullopt;
}

void Session::check_domain(const Event& e) const {
  const StudyConfig& p = bundle_->protocol;
  const Json& a = e.answer;
  bool ok = false;
  switch (e.question) {
    case Question::consent: ok = a == "agree" || a == "decline"; break;
    case Question::demographic: ok = p.demographics[demographic_cursor_].accepts(a); break;
    case Question::q1:
    case Question::q2: ok = a.is_string() && parse_survey_emotion(a.get<std::string>()).has_value(); break;
    case Question::attention: {
      const auto& opts = bundle_->attention[order_[slot_cursor_].index].options;
      ok = a.is_string() && std::find(opts.begin(), opts.end(), a.get<std::string>()) != opts.end();
      break;
    }
    case Question::scale_item:
      ok = a.is_number_integer() && a.get<long long>() >= p.likert_min && a.get<long long>() <= p.likert_max;
      break;
  }
  if (!ok) {
    throw StudyError(StudyErrc::out_of_domain,
                     "answer " + a.dump() + " is not valid for " + std::string(question_name(e.question)));
  }
}

void Session::check(const Event& e) const {
  if (e.session != id_) throw StudyError(StudyErrc::bad_request, "event for another session");
  switch (e.type) {
    case EventType::created: throw StudyError(StudyErrc::sequencing, "session " + id_ + " already exists");
    case EventType::served: {
      const auto want = serve_event(e.time_ms);
      if (!want || want->item != e.item) {
        throw StudyError(StudyErrc::sequencing, "item " + e.item + " is not due to be served");
      }
      return;
    }
    case EventType::answer: break;
  }
  if (phase_ == Phase::done) throw StudyError(StudyErrc::done, "session " + id_ + " is finished");
  if (answers_.count({e.item, e.question})) {
    throw StudyError(StudyErrc::duplicate,
                     std::string(question_name(e.question)) + " for " + e.item + " was already answered");
  }
  const auto want = expected();
  if (!want) throw StudyError(StudyErrc::sequencing, "no question is open during training; request the next item");
  if (want->first != e.item) {
    throw StudyError(StudyErrc::stale, "item " + e.item + " is not current; expected " + want->first);
  }
  if (want->second != e.question) {
    throw StudyError(StudyErrc::sequencing, "expected " + std::string(question_name(want->second)) + " for " +
                                                e.item + ", got " + std::string(question_name(e.question)));
  }
  if (phase_ == Phase::test && !served_.count(e.item)) {
    throw StudyError(StudyErrc::sequencing, "item " + e.item + " has not been served yet");
  }
  check_domain(e);
}

void Session::apply(const Event& e) {
  last_ms_ = e.time_ms;
  if (e.type == EventType::served) {
    served_.emplace(e.item, e.time_ms);
    last_served_ = e.item;
    if (phase_ == Phase::training) {
      if (training_cursor_ < static_cast<int>(bundle_->training.size())) {
        ++training_cursor_;
      } else {
        phase_ = Phase::test;
      }
    }
    return;
  }
  if (e.type == EventType::answer) {
    answers_[{e.item, e.question}] = {e.answer, e.time_ms};
    advance_after_answer(e);
  }
}

void Session::advance_after_answer(const Event& e) {
  auto finish = [&] {
    phase_ = Phase::done;
    finished_ms_ = e.time_ms;
  };
  switch (e.question) {
    case Question::consent:
      consented_ = e.answer == "agree";
      if (!consented_) {
        finish();
      } else {
        phase_ = bundle_->protocol.demographics.empty() ? Phase::training : Phase::demographics;
      }
      break;
    case Question::demographic:
      if (++demographic_cursor_ == static_cast<int>(bundle_->protocol.demographics.size())) phase_ = Phase::training;
      break;
    case Question::q1: break;
    case Question::q2:
    case Question::attention:
      if (++slot_cursor_ == static_cast<int>(order_.size())) phase_ = Phase::scales;
      break;
    case Question::scale_item: {
      const auto list = scales();
      const auto& items = list[scale_index_] == eval::ScaleKind::trust ? bundle_->protocol.trust_items
                                                                         : bundle_->protocol.satisfaction_items;
      if (++scale_item_ == static_cast<int>(items.size())) {
        scale_item_ = 0;
        if (++scale_index_ == static_cast<int>(list.size())) finish();
      }
      break;
    }
  }
}

Json Session::payload() const {
  const StudyConfig& p = bundle_->protocol;
  Json j;
  j["session"] = id_;
  j["phase"] = phase_name(phase_);
  auto explanation = [&](const StudyItem& item) {
    Json x = Json::object();
    const CohortAssets& a = item.for_cohort(cohort_);
    if (a.image) {
      x["image"] = asset_url(*a.image, 1);
      x["image_2x"] = asset_url(*a.image, 2);
    }
    if (a.phrases) x["phrases"] = *a.phrases;
    return x;
  };
  switch (phase_) {
    case Phase::consent:
      j["item"] = "consent";
      j["question"] = question_name(Question::consent);
      j["text"] = p.consent_text;
      j["options"] = Json::array({"agree", "decline"});
      break;
    case Phase::demographics: {
      const auto& q = p.demographics[demographic_cursor_];
      j["item"] = current_item();
      j["question"] = question_name(Question::demographic);
      j["prompt"] = q.prompt;
      switch (q.kind) {
        case DemographicQuestion::Kind::integer:
          j["kind"] = "integer";
          j["min"] = q.min;
          j["max"] = q.max;
          break;
        case DemographicQuestion::Kind::choice:
          j["kind"] = "choice";
          j["options"] = q.options;
          break;
        case DemographicQuestion::Kind::text: j["kind"] = "text"; break;
      }
      j["position"] = demographic_cursor_ + 1;
      j["total"] = p.demographics.size();
      break;
    }
    case Phase::training: {
      if (training_cursor_ == 0) break;
      const StudyItem& item = bundle_->training[training_cursor_ - 1];
      j["item"] = item.id;
      j["image"] = asset_url(item.image, 1);
      j["image_2x"] = asset_url(item.image, 2);
      j["gt"] = emotion_name(item.gt);
      j["mp"] = emotion_name(item.mp);
      j["explanation"] = explanation(item);
      j["position"] = training_cursor_;
      j["total"] = bundle_->training.size();
      break;
    }
    case Phase::test: {
      const Slot& s = order_[slot_cursor_];
      if (s.kind == SlotKind::test) {
        const StudyItem& item = bundle_->test[s.index];
        const bool q2 = answers_.count({item.id, Question::q1}) > 0;
        j["item"] = item.id;
        j["image"] = asset_url(item.image, 1);
        j["image_2x"] = asset_url(item.image, 2);
        j["explanation"] = explanation(item);
        j["question"] = question_name(q2 ? Question::q2 : Question::q1);
        j["prompt"] = q2 ? kQ2Prompt : kQ1Prompt;
        j["options"] = survey_options();
      } else {
        const AttentionItem& item = bundle_->attention[s.index];
        j["item"] = item.id;
        j["image"] = asset_url(item.image, 1);
        j["image_2x"] = asset_url(item.image, 2);
        j["question"] = question_name(Question::attention);
        j["prompt"] = item.prompt;
        j["options"] = item.options;
      }
      j["position"] = slot_cursor_ + 1;
      j["total"] = order_.size();
      break;
    }
    case Phase::scales: {
      const auto kind = scales()[scale_index_];
      const auto& items = kind == eval::ScaleKind::trust ? p.trust_items : p.satisfaction_items;
      j["item"] = current_item();
      j["question"] = question_name(Question::scale_item);
      j["scale"] = eval::scale_name(kind);
      j["prompt"] = items[scale_item_];
      j["min"] = p.likert_min;
      j["max"] = p.likert_max;
      j["position"] = scale_item_ + 1;
      j["total"] = items.size();
      break;
    }
    case Phase::done: break;
  }
  return j;
}

Json Session::state() const {
  Json j;
  j["session"] = id_;
  j["cohort"] = cohort_name(cohort_);
  j["phase"] = phase_name(phase_);
  j["consented"] = consented_;
  Json cursor;
  cursor["demographics"] = demographic_cursor_;
  cursor["training"] = training_cursor_;
  cursor["test"] = slot_cursor_;
  cursor["scale"] = phase_ == Phase::scales ? Json(eval::scale_name(scales()[scale_index_])) : Json();
  cursor["scale_item"] = scale_item_;
  j["cursor"] = std::move(cursor);
  if (const auto want = expected()) {
    j["expected"] = {{"item", want->first}, {"question", question_name(want->second)}};
  } else {
    j["expected"] = nullptr;
  }
  j["created_ms"] = created_ms_;
  j["finished_ms"] = finished_ms_ ? Json(*finished_ms_) : Json();
  return j;
}

}  // namespace ferx::study
