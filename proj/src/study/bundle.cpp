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

#include "ferx/study/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ferx::study {

namespace {

void check_item_assets(const StudyItem& item) {
  for (const Cohort c : kAllCohorts) {
    const CohortAssets& a = item.for_cohort(c);
    const std::string where = item.id + " (" + std::string(cohort_name(c)) + ")";
    if (!has_explanation(c)) {
      if (!a.empty()) throw BundleError(where + ": control cohort must have no explanation assets");
      continue;
    }
    if (shows_image(c) != a.image.has_value()) {
      throw BundleError(where + (shows_image(c) ? ": missing explanation image" : ": unexpected explanation image"));
    }
    if (shows_text(c) != a.phrases.has_value()) {
      throw BundleError(where + (shows_text(c) ? ": missing phrase list" : ": unexpected phrase list"));
    }
    if (a.image && !safe_asset_name(*a.image)) throw BundleError(where + ": bad asset name " + *a.image);
  }
}

void check_split(const std::vector<StudyItem>& items, int per_kind, const char* what) {
  std::array<int, kSurveyEmotionCount> correct{}, incorrect{};
  for (const auto& item : items) {
    const int e = static_cast<int>(item.gt);
    if (e < 0 || e >= kSurveyEmotionCount) {
      throw BundleError(item.id + ": ground truth " + std::string(emotion_name(item.gt)) + " is not a survey emotion");
    }
    if (static_cast<int>(item.mp) >= kSurveyEmotionCount) {
      throw BundleError(item.id + ": model prediction " + std::string(emotion_name(item.mp)) +
                        " cannot be answered in the survey");
    }
    (item.correct() ? correct : incorrect)[e] += 1;
  }
  for (int e = 0; e < kSurveyEmotionCount; ++e) {
    if (correct[e] != per_kind || incorrect[e] != per_kind) {
      throw BundleError(std::string(what) + " items for " + std::string(kEmotionNames[e]) + ": " +
                        std::to_string(correct[e]) + " correct and " + std::to_string(incorrect[e]) +
                        " incorrect, need " + std::to_string(per_kind) + " of each");
    }
  }
}

Json assets_to_json(const StudyItem& item) {
  Json j = Json::object();
  for (const Cohort c : kAllCohorts) {
    const CohortAssets& a = item.for_cohort(c);
    if (a.empty()) continue;
    Json entry = Json::object();
    if (a.image) entry["image"] = *a.image;
    if (a.phrases) entry["phrases"] = *a.phrases;
    j[std::string(cohort_name(c))] = std::move(entry);
  }
  return j;
}

Emotion emotion_field(const Json& j, const char* key, const std::string& id) {
  const auto name = j.at(key).get<std::string>();
  const auto e = parse_model_emotion(name);
  if (!e) throw BundleError(id + ": unknown emotion " + name);
  return *e;
}

StudyItem item_from_json(const Json& j) {
  StudyItem item;
  item.id = j.at("id").get<std::string>();
  item.image = j.at("image").get<std::string>();
  item.gt = emotion_field(j, "gt", item.id);
  item.mp = emotion_field(j, "mp", item.id);
  for (const auto& [key, entry] : j.at("assets").items()) {
    const auto c = parse_cohort(key);
    if (!c) throw BundleError(item.id + ": unknown cohort " + key);
    CohortAssets& a = item.assets[static_cast<int>(*c)];
    if (entry.contains("image")) a.image = entry.at("image").get<std::string>();
    if (entry.contains("phrases")) a.phrases = entry.at("phrases").get<std::vector<std::string>>();
  }
  return item;
}

Json item_to_json(const StudyItem& item) {
  Json j;
  j["id"] = item.id;
  j["image"] = item.image;
  j["gt"] = emotion_name(item.gt);
  j["mp"] = emotion_name(item.mp);
  j["assets"] = assets_to_json(item);
  return j;
}

}  // namespace

bool safe_asset_name(std::string_view name) {
  if (name.empty() || name.size() > 128 || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
           ch == '_' || ch == '.' || ch == '@';
  });
}

void validate_bundle(const StudyBundle& b) {
  if (b.training.size() != kTrainingItems) {
    throw BundleError("need " + std::to_string(kTrainingItems) + " training items, got " +
                      std::to_string(b.training.size()));
  }
  if (b.test.size() != kTestItems) {
    throw BundleError("need " + std::to_string(kTestItems) + " test items, got " + std::to_string(b.test.size()));
  }
  if (b.attention.size() != kAttentionItems) {
    throw BundleError("need " + std::to_string(kAttentionItems) + " attention items, got " +
                      std::to_string(b.attention.size()));
  }
  check_split(b.training, 1, "training");
  check_split(b.test, 2, "test");

  std::set<std::string> ids;
  auto add_id = [&](const std::string& id, const std::string& image) {
    if (id.empty() || !ids.insert(id).second) throw BundleError("duplicate or empty item id '" + id + "'");
    if (!safe_asset_name(image)) throw BundleError(id + ": bad asset name " + image);
  };
  for (const auto* items : {&b.training, &b.test}) {
    for (const auto& item : *items) {
      add_id(item.id, item.image);
      check_item_assets(item);
    }
  }
  for (const auto& a : b.attention) {
    add_id(a.id, a.image);
    const std::set<std::string> unique(a.options.begin(), a.options.end());
    if (a.options.size() < 2 || unique.size() != a.options.size()) {
      throw BundleError(a.id + ": attention options must be at least two distinct strings");
    }
    if (!unique.count(a.answer)) throw BundleError(a.id + ": answer is not among the options");
  }

  const StudyConfig& p = b.protocol;
  if (p.likert_min >= p.likert_max) throw BundleError("likert_min must be below likert_max");
  if (p.trust_items.empty() || p.satisfaction_items.empty()) throw BundleError("scales need at least one item");
  if (p.reverse_item < 1 || p.reverse_item > static_cast<int>(p.trust_items.size())) {
    throw BundleError("reverse_item outside the trust scale");
  }
  const int slots = kTestItems + kAttentionItems;
  if (p.attention_positions.size() != kAttentionItems ||
      !std::is_sorted(p.attention_positions.begin(), p.attention_positions.end()) ||
      p.attention_positions.front() < 1 || p.attention_positions.back() > slots ||
      p.attention_positions.front() == p.attention_positions.back()) {
    throw BundleError("attention_positions must be two increasing positions in 1.." + std::to_string(slots));
  }
  std::set<std::string> demo_ids;
  for (const auto& q : p.demographics) {
    if (q.id.empty() || !demo_ids.insert(q.id).second) throw BundleError("duplicate demographic id " + q.id);
    if (q.kind == DemographicQuestion::Kind::integer && q.min > q.max) throw BundleError(q.id + ": min above max");
    if (q.kind == DemographicQuestion::Kind::choice && q.options.empty()) throw BundleError(q.id + ": no options");
  }
}

std::string bundle_to_json(const StudyBundle& b) {
  Json j;
  j["format"] = "ferx-study-bundle";
  j["version"] = 1;
  j["protocol"] = config_to_json(b.protocol);
  Json training = Json::array(), test = Json::array(), attention = Json::array();
  for (const auto& item : b.training) training.push_back(item_to_json(item));
  for (const auto& item : b.test) test.push_back(item_to_json(item));
  for (const auto& a : b.attention) {
    Json e;
    e["id"] = a.id;
    e["image"] = a.image;
    e["prompt"] = a.prompt;
    e["options"] = a.options;
    e["answer"] = a.answer;
    attention.push_back(std::move(e));
  }
  j["training"] = std::move(training);
  j["test"] = std::move(test);
  j["attention"] = std::move(attention);
  return j.dump(2) + "\n";
}

StudyBundle bundle_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw BundleError(std::string("bundle is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "ferx-study-bundle") throw BundleError("not a study bundle");
    if (j.at("version") != 1) throw BundleError("unsupported bundle version");
    StudyBundle b;
    b.protocol = config_from_json(j.at("protocol"));
    for (const auto& e : j.at("training")) b.training.push_back(item_from_json(e));
    for (const auto& e : j.at("test")) b.test.push_back(item_from_json(e));
    for (const auto& e : j.at("attention")) {
      b.attention.push_back({e.at("id").get<std::string>(), e.at("image").get<std::string>(),
                             e.at("prompt").get<std::string>(), e.at("options").get<std::vector<std::string>>(),
                             e.at("answer").get<std::string>()});
    }
    validate_bundle(b);
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw BundleError(std::string("malformed bundle: ") + e.what());
  }
}

StudyBundle load_bundle(const std::filesystem::path& dir) {
  std::ifstream in(dir / kBundleFile, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + (dir / kBundleFile).string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return bundle_from_json(ss.str());
}

void save_bundle(const StudyBundle& b, const std::filesystem::path& dir) {
  validate_bundle(b);
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / kBundleFile, std::ios::binary | std::ios::trunc);
  const std::string text = bundle_to_json(b);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("cannot write " + (dir / kBundleFile).string());
}

}  // namespace ferx::study
