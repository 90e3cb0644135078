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

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ferx/eval/records.hpp"
#include "ferx/study/session.hpp"

namespace ferx::study {

using Clock = std::function<std::int64_t()>;

std::int64_t system_clock_ms();

// Append-only JSONL event file. Each append is flushed and fsynced before
// it returns; an empty path keeps the log in memory only.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path = {});
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  const std::vector<std::string>& lines() const { return lines_; }
  void append(const std::string& line);

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::vector<std::string> lines_;
};

struct ServiceOptions {
  std::uint64_t secret = 0;
  Clock clock = system_clock_ms;
  std::filesystem::path log_path;  // empty: in memory
};

// Sessions in memory, events in the log. All calls are serialised by one
// mutex, so concurrent requests never interleave a session's events.
class StudyService {
 public:
  // Replays an existing log; a bad line throws corrupt_log naming it.
  StudyService(StudyBundle bundle, ServiceOptions options);

  const StudyBundle& bundle() const { return bundle_; }

  // Least-filled cohort first, ties in cohort order, unless fixed.
  Json create_session(std::optional<Cohort> fixed = std::nullopt);
  Json next(const std::string& id);
  // body: {"item": ..., "question": ..., "answer": ...}
  Json submit(const std::string& id, const Json& body);
  Json state(const std::string& id) const;

  std::array<int, kCohortCount> cohort_counts() const;
  std::string log_snapshot() const;
  std::string export_records() const;

 private:
  Session& find(const std::string& id);
  const Session& find(const std::string& id) const;
  void record(Event e);
  void replay_line(const std::string& line, std::size_t number);

  friend eval::RecordSet records_from_log(const StudyBundle&, std::uint64_t, std::string_view);

  StudyBundle bundle_;
  ServiceOptions options_;
  mutable std::mutex mu_;
  std::unique_ptr<EventLog> log_;
  std::map<std::string, Session> sessions_;
  std::array<int, kCohortCount> counts_{};
  std::uint64_t seq_ = 0;
};

// Replays log text and emits evaluation records: trial lines ordered by
// (session, trial), then scale lines, then session lines.
eval::RecordSet records_from_log(const StudyBundle& bundle, std::uint64_t secret, std::string_view log_text);
std::string export_jsonl(const eval::RecordSet& records);

}  // namespace ferx::study
