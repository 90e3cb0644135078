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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "ferx/fau/landmarks.hpp"
#include "ferx/imaging/pnm.hpp"
#include "ferx/nn/synthetic.hpp"
#include "ferx/study/build.hpp"
#include "ferx/study/bundle.hpp"

namespace ferx::testing {

using namespace ferx::study;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ferx-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void fill_assets(StudyItem& item) {
  for (const Cohort c : kAllCohorts) {
    CohortAssets& a = item.assets[static_cast<int>(c)];
    if (shows_image(c)) a.image = item.id + "-x.bmp";
    if (shows_text(c)) a.phrases = std::vector<std::string>{"Brows Lowered", "Lips Tightened"};
  }
}

// Valid bundle with placeholder asset names; incorrect items predict the
// next emotions round the list.
inline StudyBundle make_test_bundle() {
  StudyBundle b;
  b.protocol = default_config();
  char id[32];
  for (int e = 0; e < kSurveyEmotionCount; ++e) {
    for (int k = 0; k < 2; ++k) {
      StudyItem item;
      std::snprintf(id, sizeof id, "train-%02d", 2 * e + k + 1);
      item.id = id;
      item.image = item.id + ".bmp";
      item.gt = static_cast<Emotion>(e);
      item.mp = static_cast<Emotion>(k == 0 ? e : (e + 1) % kSurveyEmotionCount);
      fill_assets(item);
      b.training.push_back(item);
    }
    for (int k = 0; k < 4; ++k) {
      StudyItem item;
      std::snprintf(id, sizeof id, "test-%02d", 4 * e + k + 1);
      item.id = id;
      item.image = item.id + ".bmp";
      item.gt = static_cast<Emotion>(e);
      item.mp = static_cast<Emotion>(k < 2 ? e : (e + k - 1) % kSurveyEmotionCount);
      fill_assets(item);
      b.test.push_back(item);
    }
  }
  b.attention.push_back({"attn-1", "attn-1.bmp", "Which object?", {"circle", "square"}, "square"});
  b.attention.push_back({"attn-2", "attn-2.bmp", "Which object?", {"circle", "triangle"}, "triangle"});
  return b;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Candidate images (48x48 blobs) and canonical landmarks under dir, with a
// manifest listing `correct` + `incorrect` candidates per emotion. Returns
// the manifest text.
inline std::string write_candidates(const std::filesystem::path& dir, int correct, int incorrect,
                                    int skip_incorrect_for = -1) {
  std::filesystem::create_directories(dir / "img");
  write_text(dir / "face.lm", fau::serialize_landmarks(fau::canonical_landmarks(48, 48)));
  std::string manifest = "# image\tgt\tmp\tlandmarks\tcorrectness\n";
  int n = 0;
  for (int e = 0; e < kSurveyEmotionCount; ++e) {
    for (int k = 0; k < correct + incorrect; ++k) {
      const bool is_correct = k < correct;
      if (!is_correct && e == skip_incorrect_for) continue;
      const auto t = nn::make_blob_image(e, kSurveyEmotionCount, 48, 48, static_cast<std::uint64_t>(100 + n));
      imaging::GrayImage img(48, 48);
      for (int i = 0; i < 48 * 48; ++i) img(i / 48, i % 48) = static_cast<std::uint8_t>(t.data()[i] * 255.0f + 0.5f);
      const std::string name = "img/c" + std::to_string(n++) + ".pgm";
      imaging::write_file_bytes(dir / name, imaging::write_pnm(img));
      const int mp = is_correct ? e : (e + 1 + k % 6) % kSurveyEmotionCount;
      manifest += name + "\t" + std::string(kEmotionNames[e]) + "\t" + std::string(kEmotionNames[mp]) +
                  "\tface.lm\t" + (is_correct ? "correct" : "incorrect") + "\n";
    }
  }
  write_text(dir / "manifest.tsv", manifest);
  return manifest;
}

}  // namespace ferx::testing
