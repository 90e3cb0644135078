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

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferx/core/cohort.hpp"
#include "ferx/core/emotion.hpp"
#include "ferx/study/protocol.hpp"

namespace ferx::study {

class BundleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kTrainingItems = 14;
inline constexpr int kTestItems = 28;
inline constexpr int kAttentionItems = 2;
inline constexpr const char* kBundleFile = "bundle.json";
inline constexpr const char* kAssetDir = "assets";

// What one cohort sees next to an item. Image names are files in assets/.
struct CohortAssets {
  std::optional<std::string> image;
  std::optional<std::vector<std::string>> phrases;

  bool empty() const { return !image && !phrases; }
  bool operator==(const CohortAssets&) const = default;
};

struct StudyItem {
  std::string id;
  std::string image;
  Emotion gt = Emotion::neutral;
  Emotion mp = Emotion::neutral;
  std::array<CohortAssets, kCohortCount> assets;

  bool correct() const { return gt == mp; }
  const CohortAssets& for_cohort(Cohort c) const { return assets[static_cast<int>(c)]; }
  bool operator==(const StudyItem&) const = default;
};

// Generic-object question unrelated to the emotion task.
struct AttentionItem {
  std::string id;
  std::string image;
  std::string prompt;
  std::vector<std::string> options;
  std::string answer;
  bool operator==(const AttentionItem&) const = default;
};

struct StudyBundle {
  StudyConfig protocol;
  std::vector<StudyItem> training;
  std::vector<StudyItem> test;
  std::vector<AttentionItem> attention;
};

// Counts, the per-emotion correct/incorrect split (1+1 training, 2+2 test),
// unique ids, safe asset names and per-cohort asset presence.
void validate_bundle(const StudyBundle& b);

bool safe_asset_name(std::string_view name);

std::string bundle_to_json(const StudyBundle& b);
StudyBundle bundle_from_json(std::string_view text);

// dir/bundle.json; validated.
StudyBundle load_bundle(const std::filesystem::path& dir);
void save_bundle(const StudyBundle& b, const std::filesystem::path& dir);

}  // namespace ferx::study
