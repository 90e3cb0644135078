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

#include "ferx/study/build.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ferx/core/random.hpp"
#include "ferx/imaging/compose.hpp"
#include "ferx/imaging/pnm.hpp"

namespace ferx::study {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return out;
    start = tab + 1;
  }
}

std::string slug(Cohort c) {
  std::string s(cohort_name(c));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::string two_digits(int n) {
  return (n < 10 ? "0" : "") + std::to_string(n);
}

void write_asset(const std::filesystem::path& dir, const std::string& name, const imaging::RgbImage& image) {
  imaging::write_file_bytes(dir / name, imaging::write_bmp(image));
  const auto dot = name.rfind('.');
  imaging::write_file_bytes(dir / (name.substr(0, dot) + "@2x" + name.substr(dot)),
                            imaging::write_bmp(imaging::upscale_nearest(image, 2)));
}

struct Input {
  imaging::GrayImage image;
  fau::LandmarkSet landmarks;
};

Input load_input(const ManifestEntry& entry, const std::filesystem::path& base, const nn::Network& fer) {
  Input in{imaging::read_pgm_file(base / entry.image), fau::load_landmarks(base / entry.landmarks)};
  const auto& geom = fer.input_geometry();
  if (in.image.rows() != geom.height || in.image.cols() != geom.width) {
    throw ManifestError("manifest line " + std::to_string(entry.line) + ": image is " +
                        imaging::dims_string(in.image.cols(), in.image.rows()) + ", model takes " +
                        imaging::dims_string(geom.width, geom.height));
  }
  in.landmarks.check_bounds(static_cast<int>(in.image.cols()), static_cast<int>(in.image.rows()));
  return in;
}

StudyItem render_item(const ManifestEntry& entry, const std::string& id, const std::filesystem::path& base,
                      const pipeline::ModelPair& models, const fau::FauVocabulary& vocab,
                      const std::filesystem::path& assets, const BuildOptions& options) {
  const auto [image, landmarks] = load_input(entry, base, models.fer);

  StudyItem item;
  item.id = id;
  item.image = id + ".bmp";
  item.gt = entry.gt;
  item.mp = entry.mp;
  write_asset(assets, item.image, imaging::to_rgb(image));

  pipeline::ExplainOptions opts = options.explain;
  opts.seed = mix_seed(options.seed, hash_bytes(id));
  for (const Cohort c : kAllCohorts) {
    const auto method = pipeline::method_for_cohort(c);
    if (!method) continue;
    const pipeline::Explanation e = pipeline::explain_image(models, vocab, image, &landmarks, *method, opts,
                                                            static_cast<int>(entry.mp));
    CohortAssets& a = item.assets[static_cast<int>(c)];
    if (shows_image(c)) {
      a.image = id + "-" + slug(c) + ".bmp";
      write_asset(assets, *a.image, *e.overlay);
    }
    if (shows_text(c)) a.phrases = *e.phrases;
  }
  return item;
}

AttentionItem render_attention(int index, const std::vector<imaging::Point>& shape, const std::string& answer,
                               const std::filesystem::path& assets, int width, int height) {
  imaging::BinaryMask mask = imaging::BinaryMask::Constant(height, width, false);
  imaging::draw_polyline(mask, shape, true, 2);
  const imaging::GrayImage img = mask.select(imaging::GrayImage::Zero(height, width),
                                             imaging::GrayImage::Constant(height, width, 255));
  AttentionItem a;
  a.id = "attn-" + std::to_string(index + 1);
  a.image = a.id + ".bmp";
  a.prompt = "Attention check: which object is shown in this picture?";
  a.options = {"circle", "square", "triangle", "star"};
  a.answer = answer;
  write_asset(assets, a.image, imaging::to_rgb(img));
  return a;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto where = "manifest line " + std::to_string(number) + ": ";
    const auto f = split_tabs(line);
    if (f.size() != 5) throw ManifestError(where + "expected 5 tab-separated fields, got " + std::to_string(f.size()));
    ManifestEntry e;
    e.line = number;
    e.image = f[0];
    e.landmarks = f[3];
    const auto gt = parse_survey_emotion(f[1]);
    const auto mp = parse_survey_emotion(f[2]);
    if (!gt) throw ManifestError(where + "ground truth '" + f[1] + "' is not a survey emotion");
    if (!mp) throw ManifestError(where + "model prediction '" + f[2] + "' is not a survey emotion");
    e.gt = *gt;
    e.mp = *mp;
    if (f[4] == "correct") {
      e.correct = true;
    } else if (f[4] != "incorrect") {
      throw ManifestError(where + "last field must be correct or incorrect");
    }
    if (e.correct != (e.gt == e.mp)) {
      throw ManifestError(where + "marked " + f[4] + " but gt is " + f[1] + " and mp is " + f[2]);
    }
    if (e.image.empty() || e.landmarks.empty()) throw ManifestError(where + "empty path");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

Selection select_items(const std::vector<ManifestEntry>& entries, std::uint64_t seed) {
  Selection sel;
  for (int e = 0; e < kSurveyEmotionCount; ++e) {
    std::array<std::vector<ManifestEntry>, 2> groups;  // [0] correct, [1] incorrect
    for (const auto& m : entries) {
      if (static_cast<int>(m.gt) == e) groups[m.correct ? 0 : 1].push_back(m);
    }
    for (int g = 0; g < 2; ++g) {
      auto& pool = groups[g];
      const char* kind = g == 0 ? "correct" : "incorrect";
      if (pool.size() < 2) {
        throw ManifestError("need at least 2 " + std::string(kind) + " candidates for " +
                            std::string(kEmotionNames[e]) + ", found " + std::to_string(pool.size()));
      }
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(2 * e + g)));
      rng.shuffle(std::span<ManifestEntry>(pool));
      sel.test.push_back(pool[0]);
      sel.test.push_back(pool[1]);
      if (pool.size() > 2) {
        sel.training.push_back(pool[2]);
      } else {
        sel.training.push_back(pool[0]);
        sel.warnings.push_back("no spare " + std::string(kind) + " image for " + std::string(kEmotionNames[e]) +
                               "; training reuses manifest line " + std::to_string(pool[0].line));
      }
    }
  }
  return sel;
}

BuildResult build_bundle(const std::vector<ManifestEntry>& entries, const std::filesystem::path& base_dir,
                         const pipeline::ModelPair& models, const fau::FauVocabulary& vocab,
                         const std::filesystem::path& out_dir, const BuildOptions& options) {
  Selection sel = select_items(entries, options.seed);
  // Check every input before writing anything.
  for (const auto* group : {&sel.training, &sel.test}) {
    for (const auto& entry : *group) load_input(entry, base_dir, models.fer);
  }
  const std::filesystem::path assets = out_dir / kAssetDir;
  std::filesystem::create_directories(assets);

  BuildResult result;
  result.warnings = sel.warnings;
  StudyBundle& b = result.bundle;
  b.protocol = options.protocol;
  std::string selection = "# id\tmanifest_line\timage\n";
  for (std::size_t i = 0; i < sel.training.size(); ++i) {
    const std::string id = "train-" + two_digits(static_cast<int>(i) + 1);
    b.training.push_back(render_item(sel.training[i], id, base_dir, models, vocab, assets, options));
    selection += id + "\t" + std::to_string(sel.training[i].line) + "\t" + sel.training[i].image + "\n";
  }
  for (std::size_t i = 0; i < sel.test.size(); ++i) {
    const std::string id = "test-" + two_digits(static_cast<int>(i) + 1);
    b.test.push_back(render_item(sel.test[i], id, base_dir, models, vocab, assets, options));
    selection += id + "\t" + std::to_string(sel.test[i].line) + "\t" + sel.test[i].image + "\n";
  }
  const int w = models.fer.input_geometry().width;
  const int h = models.fer.input_geometry().height;
  auto px = [](double f, int extent) { return static_cast<int>(f * (extent - 1) + 0.5); };
  b.attention.push_back(render_attention(
      0, {{px(0.25, w), px(0.25, h)}, {px(0.75, w), px(0.25, h)}, {px(0.75, w), px(0.75, h)}, {px(0.25, w), px(0.75, h)}},
      "square", assets, w, h));
  b.attention.push_back(render_attention(1, {{px(0.5, w), px(0.2, h)}, {px(0.8, w), px(0.78, h)}, {px(0.2, w), px(0.78, h)}},
                                         "triangle", assets, w, h));
  save_bundle(b, out_dir);
  imaging::write_file_bytes(out_dir / "selection.tsv",
                            std::span(reinterpret_cast<const std::uint8_t*>(selection.data()), selection.size()));
  return result;
}

}  // namespace ferx::study
