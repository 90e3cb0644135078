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

#include "ferx/eval/records.hpp"

#include <sstream>

#include "json.hpp"

namespace ferx::eval {

using Json = nlohmann::ordered_json;

std::string_view scale_name(ScaleKind k) { return k == ScaleKind::trust ? "trust" : "satisfaction"; }

std::string to_jsonl(const TrialRecord& r) {
  Json j;
  j["type"] = "trial";
  j["session"] = r.session;
  j["cohort"] = cohort_name(r.cohort);
  j["trial"] = r.trial;
  j["image"] = r.image;
  j["gt"] = emotion_name(r.gt);
  j["mp"] = emotion_name(r.mp);
  j["hgtp"] = emotion_name(r.hgtp);
  j["hmp"] = emotion_name(r.hmp);
  j["rt_ms"] = r.rt_ms;
  return j.dump();
}

std::string to_jsonl(const ScaleResponse& r) {
  Json j;
  j["type"] = "scale";
  j["session"] = r.session;
  j["cohort"] = cohort_name(r.cohort);
  j["scale"] = scale_name(r.kind);
  j["items"] = r.items;
  return j.dump();
}

std::string to_jsonl(const SessionRecord& r) {
  Json j;
  j["type"] = "session";
  j["session"] = r.session;
  j["cohort"] = cohort_name(r.cohort);
  j["complete"] = r.complete;
  j["duration_ms"] = r.duration_ms;
  j["attention_passed"] = r.attention_passed;
  j["attention_total"] = r.attention_total;
  return j.dump();
}

namespace {

struct LineReader {
  const Json& j;
  int line;

  [[noreturn]] void fail(const std::string& what) const {
    throw EvaluationError("record line " + std::to_string(line) + ": " + what);
  }
  const Json& at(const char* key) const {
    const auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field ") + key);
    return *it;
  }
  std::string str(const char* key) const {
    const Json& v = at(key);
    if (!v.is_string()) fail(std::string(key) + " must be a string");
    return v.get<std::string>();
  }
  std::int64_t integer(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) fail(std::string(key) + " must be an integer");
    return v.get<std::int64_t>();
  }
  Cohort cohort() const {
    const auto c = parse_cohort(str("cohort"));
    if (!c) fail("unknown cohort " + str("cohort"));
    return *c;
  }
  Emotion emotion(const char* key) const {
    const auto e = parse_survey_emotion(str(key));
    if (!e) fail(std::string(key) + " is not a survey emotion: " + str(key));
    return *e;
  }
};

}  // namespace

RecordSet parse_records(std::string_view text) {
  RecordSet out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      throw EvaluationError("record line " + std::to_string(line) + ": not JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw EvaluationError("record line " + std::to_string(line) + ": not an object");
    const LineReader r{j, line};
    const std::string type = r.str("type");
    if (type == "trial") {
      TrialRecord t;
      t.session = r.str("session");
      t.cohort = r.cohort();
      t.trial = static_cast<int>(r.integer("trial"));
      t.image = r.str("image");
      t.gt = r.emotion("gt");
      t.mp = r.emotion("mp");
      t.hgtp = r.emotion("hgtp");
      t.hmp = r.emotion("hmp");
      t.rt_ms = r.integer("rt_ms");
      out.trials.push_back(std::move(t));
    } else if (type == "scale") {
      ScaleResponse s;
      s.session = r.str("session");
      s.cohort = r.cohort();
      const std::string kind = r.str("scale");
      if (kind == "trust") {
        s.kind = ScaleKind::trust;
      } else if (kind == "satisfaction") {
        s.kind = ScaleKind::satisfaction;
      } else {
        r.fail("unknown scale " + kind);
      }
      const Json& items = r.at("items");
      if (!items.is_array()) r.fail("items must be an array");
      for (const auto& v : items) {
        if (!v.is_number_integer()) r.fail("scale items must be integers");
        s.items.push_back(v.get<int>());
      }
      out.scales.push_back(std::move(s));
    } else if (type == "session") {
      SessionRecord s;
      s.session = r.str("session");
      s.cohort = r.cohort();
      const Json& c = r.at("complete");
      if (!c.is_boolean()) r.fail("complete must be a boolean");
      s.complete = c.get<bool>();
      s.duration_ms = r.integer("duration_ms");
      s.attention_passed = static_cast<int>(r.integer("attention_passed"));
      s.attention_total = static_cast<int>(r.integer("attention_total"));
      out.sessions.push_back(std::move(s));
    } else {
      r.fail("unknown record type " + type);
    }
  }
  return out;
}

}  // namespace ferx::eval
