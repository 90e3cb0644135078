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

#include <gtest/gtest.h>

#include <set>

#include "ferx/imaging/pnm.hpp"
#include "ferx/nn/reference.hpp"
#include "study_fixture.hpp"

namespace ferx::study {
namespace {

using testing::TempDir;

pipeline::ModelPair small_models() {
  return {nn::make_reference_network({}, 1), nn::make_fau_head({16}, 2)};
}

BuildOptions quick_options(std::uint64_t seed) {
  BuildOptions o;
  o.seed = seed;
  o.explain.lime_samples = 40;
  o.explain.shap_samples = 128;
  return o;
}

std::map<std::string, std::vector<std::uint8_t>> tree_bytes(const std::filesystem::path& root) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).string()] = imaging::read_file_bytes(e.path());
  }
  return out;
}

TEST(Manifest, ParsesAndValidatesLines) {
  const auto entries = parse_manifest(
      "# comment\n"
      "a.pgm\tanger\tanger\ta.lm\tcorrect\r\n"
      "\n"
      "b.pgm\tfear\tsurprise\tb.lm\tincorrect\n");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].gt, Emotion::anger);
  EXPECT_TRUE(entries[0].correct);
  EXPECT_EQ(entries[0].line, 2);
  EXPECT_EQ(entries[1].mp, Emotion::surprise);
  EXPECT_EQ(entries[1].line, 4);

  auto expect_bad = [](const std::string& text, const std::string& fragment) {
    try {
      parse_manifest(text);
      ADD_FAILURE() << "accepted " << text;
    } catch (const ManifestError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_bad("a.pgm\tanger\tanger\ta.lm\n", "5 tab-separated");
  expect_bad("x\tx\tx\tx\tx\n\na.pgm\tanger\tfear\ta.lm\tcorrect\n", "line 1");
  expect_bad("a.pgm\tanger\tfear\ta.lm\tcorrect\n", "marked correct");
  expect_bad("a.pgm\tanger\tanger\ta.lm\tincorrect\n", "marked incorrect");
  expect_bad("a.pgm\tcontempt\tanger\ta.lm\tincorrect\n", "not a survey emotion");
  expect_bad("a.pgm\tanger\tanger\ta.lm\tyes\n", "correct or incorrect");
}

TEST(Selection, ExactlyTwoPlusTwoGivesTwentyEightTestItems) {
  TempDir dir("sel");
  const auto entries = parse_manifest(testing::write_candidates(dir.path(), 2, 2));
  const Selection s = select_items(entries, 1);
  EXPECT_EQ(s.test.size(), 28u);
  EXPECT_EQ(s.training.size(), 14u);
  EXPECT_EQ(s.warnings.size(), 14u);
  for (int e = 0; e < kSurveyEmotionCount; ++e) {
    int correct = 0, incorrect = 0;
    for (const auto& m : s.test) {
      if (static_cast<int>(m.gt) == e) (m.correct ? correct : incorrect) += 1;
    }
    EXPECT_EQ(correct, 2);
    EXPECT_EQ(incorrect, 2);
  }
}

TEST(Selection, SparesKeepTrainingDisjointFromTest) {
  TempDir dir("spare");
  const auto entries = parse_manifest(testing::write_candidates(dir.path(), 4, 5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Selection s = select_items(entries, seed);
    EXPECT_TRUE(s.warnings.empty());
    std::set<int> test_lines;
    for (const auto& m : s.test) test_lines.insert(m.line);
    EXPECT_EQ(test_lines.size(), 28u);
    for (const auto& m : s.training) EXPECT_FALSE(test_lines.count(m.line));
  }
  const Selection a = select_items(entries, 3), b = select_items(entries, 3);
  for (std::size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test[i].line, b.test[i].line);
}

TEST(Selection, MissingIncorrectFearIsNamed) {
  TempDir dir("fear");
  const auto entries = parse_manifest(testing::write_candidates(dir.path(), 2, 2, static_cast<int>(Emotion::fear)));
  try {
    select_items(entries, 0);
    FAIL();
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("incorrect candidates for fear"), std::string::npos) << e.what();
  }
}

TEST(BuildBundle, ValidAndByteIdenticalOnRebuild) {
  TempDir dir("build");
  const auto entries = parse_manifest(testing::write_candidates(dir.path(), 3, 3));
  const auto models = small_models();
  const auto vocab = fau::default_vocabulary();
  const BuildResult r1 = build_bundle(entries, dir.path(), models, vocab, dir.path() / "b1", quick_options(5));
  const BuildResult r2 = build_bundle(entries, dir.path(), models, vocab, dir.path() / "b2", quick_options(5));
  EXPECT_TRUE(r1.warnings.empty());
  const StudyBundle loaded = load_bundle(dir.path() / "b1");
  EXPECT_EQ(loaded.test, r1.bundle.test);
  const auto t1 = tree_bytes(dir.path() / "b1");
  const auto t2 = tree_bytes(dir.path() / "b2");
  EXPECT_EQ(t1, t2);
  // Original, 7 cohorts minus CAI and FAU-T for images, each at 1x and 2x,
  // plus two attention images.
  const std::size_t images = (14 + 28) * 2 * 6 + 2 * 2;
  EXPECT_EQ(t1.size(), images + 2);
  for (const auto* items : {&loaded.training, &loaded.test}) {
    for (const auto& item : *items) {
      EXPECT_TRUE(t1.count("assets/" + item.image));
      for (const Cohort c : kAllCohorts) {
        const auto& a = item.for_cohort(c);
        if (a.image) EXPECT_TRUE(t1.count("assets/" + *a.image)) << *a.image;
      }
    }
  }
  const auto bmp = t1.at("assets/test-01@2x.bmp");
  ASSERT_GE(bmp.size(), 26u);
  EXPECT_EQ(bmp[0], 'B');
  EXPECT_EQ(bmp[18], 96);  // width
  const BuildResult r3 = build_bundle(entries, dir.path(), models, vocab, dir.path() / "b3", quick_options(6));
  EXPECT_NE(tree_bytes(dir.path() / "b3"), t1);
}

TEST(BuildBundle, RejectsWrongImageSize) {
  TempDir dir("size");
  testing::write_candidates(dir.path(), 2, 2);
  imaging::write_file_bytes(dir.path() / "img/c0.pgm", imaging::write_pnm(imaging::GrayImage::Zero(40, 40)));
  const auto entries = load_manifest(dir.path() / "manifest.tsv");
  EXPECT_THROW(build_bundle(entries, dir.path(), small_models(), fau::default_vocabulary(), dir.path() / "out",
                            quick_options(0)),
               ManifestError);
}

}  // namespace
}  // namespace ferx::study
