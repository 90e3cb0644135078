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

#include "ferx/study/service.hpp"

#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ferx::study {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string session_id(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "S%06zu", n);
  return buf;
}

}  // namespace

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path_.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (!text.empty() && text.back() != '\n') {
      throw StudyError(StudyErrc::corrupt_log, "event log line " + std::to_string(split_lines(text).size()) +
                                                   ": truncated record");
    }
    lines_ = split_lines(text);
  }
  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw std::runtime_error("cannot open " + path_.string() + ": " + std::strerror(errno));
}

EventLog::~EventLog() {
  if (file_) std::fclose(file_);
}

void EventLog::append(const std::string& line) {
  if (file_) {
    const std::string out = line + "\n";
    if (std::fwrite(out.data(), 1, out.size(), file_) != out.size() || std::fflush(file_) != 0 ||
        ::fsync(::fileno(file_)) != 0) {
      throw std::runtime_error("event log write failed: " + std::string(std::strerror(errno)));
    }
  }
  lines_.push_back(line);
}

StudyService::StudyService(StudyBundle bundle, ServiceOptions options)
    : bundle_(std::move(bundle)), options_(std::move(options)) {
  validate_bundle(bundle_);
  log_ = std::make_unique<EventLog>(options_.log_path);
  const auto& lines = log_->lines();
  for (std::size_t i = 0; i < lines.size(); ++i) replay_line(lines[i], i + 1);
}

void StudyService::replay_line(const std::string& line, std::size_t number) {
  try {
    const Event e = event_from_json(line);
    if (e.seq != seq_ + 1) throw StudyError(StudyErrc::corrupt_log, "sequence number " + std::to_string(e.seq));
    if (e.type == EventType::created) {
      if (sessions_.count(e.session)) throw StudyError(StudyErrc::corrupt_log, "session created twice");
      sessions_.emplace(e.session,
                        Session(bundle_, e.session, e.cohort, session_seed(options_.secret, e.session), e.time_ms));
      counts_[static_cast<int>(e.cohort)] += 1;
    } else {
      const auto it = sessions_.find(e.session);
      if (it == sessions_.end()) throw StudyError(StudyErrc::corrupt_log, "unknown session " + e.session);
      it->second.check(e);
      it->second.apply(e);
    }
    seq_ = e.seq;
  } catch (const StudyError& e) {
    throw StudyError(StudyErrc::corrupt_log, "event log line " + std::to_string(number) + ": " + e.what());
  }
}

Session& StudyService::find(const std::string& id) {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw StudyError(StudyErrc::not_found, "no session " + id);
  return it->second;
}

const Session& StudyService::find(const std::string& id) const {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw StudyError(StudyErrc::not_found, "no session " + id);
  return it->second;
}

void StudyService::record(Event e) {
  e.seq = seq_ + 1;
  log_->append(event_to_json(e));
  seq_ = e.seq;
  if (e.type == EventType::created) {
    sessions_.emplace(e.session,
                      Session(bundle_, e.session, e.cohort, session_seed(options_.secret, e.session), e.time_ms));
    counts_[static_cast<int>(e.cohort)] += 1;
  } else {
    find(e.session).apply(e);
  }
}

Json StudyService::create_session(std::optional<Cohort> fixed) {
  std::lock_guard lock(mu_);
  Cohort cohort = Cohort::cai;
  if (fixed) {
    cohort = *fixed;
  } else {
    for (const Cohort c : kAllCohorts) {
      if (counts_[static_cast<int>(c)] < counts_[static_cast<int>(cohort)]) cohort = c;
    }
  }
  Event e;
  e.time_ms = options_.clock();
  e.session = session_id(sessions_.size() + 1);
  e.type = EventType::created;
  e.cohort = cohort;
  record(e);
  return find(e.session).state();
}

Json StudyService::next(const std::string& id) {
  std::lock_guard lock(mu_);
  Session& s = find(id);
  if (auto e = s.serve_event(options_.clock())) {
    s.check(*e);
    record(std::move(*e));
  }
  return s.payload();
}

Json StudyService::submit(const std::string& id, const Json& body) {
  std::lock_guard lock(mu_);
  Session& s = find(id);
  if (!body.is_object() || !body.contains("item") || !body["item"].is_string() || !body.contains("question") ||
      !body["question"].is_string() || !body.contains("answer")) {
    throw StudyError(StudyErrc::bad_request, "response needs string item, string question and an answer");
  }
  const auto q = parse_question(body["question"].get<std::string>());
  if (!q) throw StudyError(StudyErrc::bad_request, "unknown question " + body["question"].get<std::string>());
  Event e;
  e.time_ms = options_.clock();
  e.session = id;
  e.type = EventType::answer;
  e.item = body["item"].get<std::string>();
  e.question = *q;
  e.answer = body["answer"];
  s.check(e);
  record(e);
  Json ack;
  ack["accepted"] = true;
  ack["state"] = s.state();
  return ack;
}

Json StudyService::state(const std::string& id) const {
  std::lock_guard lock(mu_);
  return find(id).state();
}

std::array<int, kCohortCount> StudyService::cohort_counts() const {
  std::lock_guard lock(mu_);
  return counts_;
}

std::string StudyService::log_snapshot() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& line : log_->lines()) out += line + "\n";
  return out;
}

std::string StudyService::export_records() const {
  return export_jsonl(records_from_log(bundle_, options_.secret, log_snapshot()));
}

eval::RecordSet records_from_log(const StudyBundle& bundle, std::uint64_t secret, std::string_view log_text) {
  // The replica never touches disk; replay validates every line.
  ServiceOptions opts;
  opts.secret = secret;
  StudyService replica(bundle, opts);
  std::vector<std::string> lines = split_lines(log_text);
  for (std::size_t i = 0; i < lines.size(); ++i) replica.replay_line(lines[i], i + 1);

  eval::RecordSet out;
  for (const auto& [id, s] : replica.sessions_) {
    const auto& answers = s.answers();
    auto answer = [&](const std::string& item, Question q) -> const Answer* {
      const auto it = answers.find({item, q});
      return it == answers.end() ? nullptr : &it->second;
    };
    int trial = 0;
    int attention_passed = 0, attention_total = 0;
    for (const Slot& slot : s.order()) {
      if (slot.kind == SlotKind::attention) {
        const AttentionItem& a = bundle.attention[slot.index];
        if (const Answer* ans = answer(a.id, Question::attention)) {
          ++attention_total;
          attention_passed += ans->value == a.answer ? 1 : 0;
        }
        continue;
      }
      const StudyItem& item = bundle.test[slot.index];
      const Answer* q1 = answer(item.id, Question::q1);
      const Answer* q2 = answer(item.id, Question::q2);
      if (q1 && q2) {
        eval::TrialRecord r;
        r.session = id;
        r.cohort = s.cohort();
        r.trial = trial;
        r.image = item.id;
        r.gt = item.gt;
        r.mp = item.mp;
        r.hgtp = *parse_survey_emotion(q1->value.get<std::string>());
        r.hmp = *parse_survey_emotion(q2->value.get<std::string>());
        r.rt_ms = q2->time_ms - s.served().at(item.id);
        out.trials.push_back(std::move(r));
      }
      ++trial;
    }
    for (const auto kind : {eval::ScaleKind::trust, eval::ScaleKind::satisfaction}) {
      if (kind == eval::ScaleKind::satisfaction && !has_explanation(s.cohort())) continue;
      const char* prefix = kind == eval::ScaleKind::trust ? "trust-" : "satisfaction-";
      const auto& prompts =
          kind == eval::ScaleKind::trust ? bundle.protocol.trust_items : bundle.protocol.satisfaction_items;
      eval::ScaleResponse r;
      r.session = id;
      r.cohort = s.cohort();
      r.kind = kind;
      for (std::size_t k = 0; k < prompts.size(); ++k) {
        const Answer* a = answer(prefix + std::to_string(k + 1), Question::scale_item);
        if (!a) break;
        r.items.push_back(a->value.get<int>());
      }
      if (r.items.size() == prompts.size()) out.scales.push_back(std::move(r));
    }
    eval::SessionRecord sr;
    sr.session = id;
    sr.cohort = s.cohort();
    sr.complete = s.phase() == Phase::done && s.consented();
    sr.duration_ms = s.finished_ms().value_or(s.last_event_ms()) - s.created_ms();
    sr.attention_passed = attention_passed;
    sr.attention_total = attention_total;
    out.sessions.push_back(std::move(sr));
  }
  return out;
}

std::string export_jsonl(const eval::RecordSet& records) {
  std::string out;
  for (const auto& r : records.trials) out += eval::to_jsonl(r) + "\n";
  for (const auto& r : records.scales) out += eval::to_jsonl(r) + "\n";
  for (const auto& r : records.sessions) out += eval::to_jsonl(r) + "\n";
  return out;
}

}  // namespace ferx::study
