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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ferx/study/bundle.hpp"

namespace ferx::study {

enum class StudyErrc {
  not_found,
  bad_request,
  duplicate,      // (item, question) already answered
  stale,          // item is not the one being served
  sequencing,     // right item, wrong question or not yet served
  out_of_domain,  // answer outside the question's domain
  done,           // session finished
  unauthorized,
  corrupt_log,
};

std::string_view errc_name(StudyErrc c);

class StudyError : public std::runtime_error {
 public:
  StudyError(StudyErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  StudyErrc code() const { return code_; }

 private:
  StudyErrc code_;
};

enum class EventType { created, served, answer };

struct Event {
  std::uint64_t seq = 0;
  std::int64_t time_ms = 0;
  std::string session;
  EventType type = EventType::created;
  Cohort cohort = Cohort::cai;  // created
  std::string item;             // served, answer
  Question question = Question::consent;
  Json answer;

  bool operator==(const Event&) const = default;
};

std::string event_to_json(const Event& e);  // one line, fixed key order
Event event_from_json(std::string_view line);  // throws StudyError(corrupt_log)

enum class SlotKind { test, attention };

struct Slot {
  SlotKind kind = SlotKind::test;
  int index = 0;  // into bundle.test or bundle.attention
  bool operator==(const Slot&) const = default;
};

// 28 test items in seeded order with the attention checks at their
// configured 1-based positions.
std::vector<Slot> trial_order(const StudyBundle& bundle, std::uint64_t seed);

std::uint64_t session_seed(std::uint64_t secret, std::string_view session_id);

struct Answer {
  Json value;
  std::int64_t time_ms = 0;
};

// One participant. Every mutation goes through apply(), so replaying the
// event log rebuilds the same state.
class Session {
 public:
  Session(const StudyBundle& bundle, std::string id, Cohort cohort, std::uint64_t seed, std::int64_t created_ms);

  const std::string& id() const { return id_; }
  Cohort cohort() const { return cohort_; }
  Phase phase() const { return phase_; }
  const std::vector<Slot>& order() const { return order_; }
  bool consented() const { return consented_; }
  std::int64_t created_ms() const { return created_ms_; }
  std::optional<std::int64_t> finished_ms() const { return finished_ms_; }
  std::int64_t last_event_ms() const { return last_ms_; }
  int training_seen() const { return training_cursor_; }
  int slot_cursor() const { return slot_cursor_; }

  // Event a GET next must log before answering, if any. Throws done.
  std::optional<Event> serve_event(std::int64_t now) const;

  // Item id and question the session waits for; nullopt in training or done.
  std::optional<std::pair<std::string, Question>> expected() const;

  // Throws StudyError for anything apply() would not accept.
  void check(const Event& e) const;
  void apply(const Event& e);

  // Payload for the item most recently served (GET next body).
  Json payload() const;
  Json state() const;

  const std::map<std::pair<std::string, Question>, Answer>& answers() const { return answers_; }
  const std::map<std::string, std::int64_t>& served() const { return served_; }

 private:
  std::string current_item() const;
  std::vector<eval::ScaleKind> scales() const;
  Json domain_options(Question q) const;
  void check_domain(const Event& e) const;
  void advance_after_answer(const Event& e);

  const StudyBundle* bundle_;
  std::string id_;
  Cohort cohort_;
  std::vector<Slot> order_;
  std::int64_t created_ms_;
  std::int64_t last_ms_;
  std::optional<std::int64_t> finished_ms_;

  Phase phase_ = Phase::consent;
  bool consented_ = false;
  int demographic_cursor_ = 0;
  int training_cursor_ = 0;
  int slot_cursor_ = 0;
  int scale_index_ = 0;
  int scale_item_ = 0;
  std::optional<std::string> last_served_;
  std::map<std::string, std::int64_t> served_;
  std::map<std::pair<std::string, Question>, Answer> answers_;
};

}  // namespace ferx::study
