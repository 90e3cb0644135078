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

#include "ferx/eval/metrics.hpp"

#include <map>

namespace ferx::eval {

namespace {

void require_records(std::span<const TrialRecord> records) {
  if (records.empty()) throw EvaluationError("no trial records");
}

}  // namespace

double hp_accuracy(std::span<const TrialRecord> records) {
  require_records(records);
  long hits = 0;
  for (const auto& r : records) hits += r.hgtp == r.gt;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double hmp_accuracy(std::span<const TrialRecord> records) {
  require_records(records);
  long hits = 0;
  for (const auto& r : records) hits += r.hmp == r.mp;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

int appropriate_trust(std::span<const TrialRecord> records) {
  require_records(records);
  int n = 0;
  for (const auto& r : records) n += is_appropriate(r.gt == r.mp, r.hgtp == r.hmp);
  return n;
}

void validate_scale(const ScaleResponse& r, const ScaleSpec& spec) {
  if (static_cast<int>(r.items.size()) != spec.items) {
    throw EvaluationError(std::string(scale_name(r.kind)) + " scale needs " + std::to_string(spec.items) +
                          " items, got " + std::to_string(r.items.size()));
  }
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    if (r.items[i] < spec.min || r.items[i] > spec.max) {
      throw EvaluationError(std::string(scale_name(r.kind)) + " item " + std::to_string(i + 1) + " = " +
                            std::to_string(r.items[i]) + " outside " + std::to_string(spec.min) + ".." +
                            std::to_string(spec.max));
    }
  }
}

int trust_scale_total(const ScaleResponse& r, const ScaleSpec& spec) {
  validate_scale(r, spec);
  if (spec.reverse_item < 1 || spec.reverse_item > spec.items) throw EvaluationError("reverse item out of range");
  int total = 0;
  for (int i = 0; i < spec.items; ++i) total += (i + 1 == spec.reverse_item) ? -r.items[i] : r.items[i];
  return total;
}

int satisfaction_total(const ScaleResponse& r, const ScaleSpec& spec) {
  validate_scale(r, spec);
  int total = 0;
  for (const int v : r.items) total += v;
  return total;
}

std::vector<ParticipantMetrics> participant_metrics(const RecordSet& records, const ScaleSpec& spec) {
  std::map<std::string, std::vector<TrialRecord>> by_session;
  for (const auto& t : records.trials) by_session[t.session].push_back(t);
  std::vector<ParticipantMetrics> out;
  for (const auto& [session, trials] : by_session) {
    ParticipantMetrics m;
    m.session = session;
    m.cohort = trials.front().cohort;
    for (const auto& t : trials) {
      if (t.cohort != m.cohort) throw EvaluationError("session " + session + " spans several cohorts");
    }
    m.trials = static_cast<int>(trials.size());
    m.hp_accuracy = hp_accuracy(trials);
    m.hmp_accuracy = hmp_accuracy(trials);
    m.appropriate_trust = appropriate_trust(trials);
    for (const auto& s : records.scales) {
      if (s.session != session) continue;
      if (s.kind == ScaleKind::trust) {
        m.trust_total = trust_scale_total(s, spec);
      } else {
        m.satisfaction_total = satisfaction_total(s, spec);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace ferx::eval
