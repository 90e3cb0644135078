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

#include <filesystem>
#include <string>
#include <vector>

#include "ferx/pipeline/explain.hpp"
#include "ferx/study/bundle.hpp"

namespace ferx::study {

class ManifestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One candidate image. Manifest lines are tab-separated:
//   image  gt  mp  landmarks  correct|incorrect
// '#' starts a comment line; relative paths resolve against the manifest's
// directory.
struct ManifestEntry {
  std::string image;
  Emotion gt = Emotion::neutral;
  Emotion mp = Emotion::neutral;
  std::string landmarks;
  bool correct = false;
  int line = 0;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct Selection {
  std::vector<ManifestEntry> training;  // 14, emotion order, correct first
  std::vector<ManifestEntry> test;      // 28, emotion order, correct first
  std::vector<std::string> warnings;
};

// Seeded draw of 2 correct + 2 incorrect test images per emotion and one of
// each for training from what is left. When nothing is left the training
// item reuses a test image and a warning says so. Too few candidates for an
// emotion throws ManifestError naming it.
Selection select_items(const std::vector<ManifestEntry>& entries, std::uint64_t seed);

struct BuildOptions {
  pipeline::ExplainOptions explain;
  std::uint64_t seed = 0;
  StudyConfig protocol = default_config();
};

struct BuildResult {
  StudyBundle bundle;
  std::vector<std::string> warnings;
};

// Renders every cohort's assets into out_dir/assets and writes bundle.json
// and selection.tsv. Explanations target each item's listed MP.
BuildResult build_bundle(const std::vector<ManifestEntry>& entries, const std::filesystem::path& base_dir,
                         const pipeline::ModelPair& models, const fau::FauVocabulary& vocab,
                         const std::filesystem::path& out_dir, const BuildOptions& options);

}  // namespace ferx::study
