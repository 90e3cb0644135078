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

#include "ferx/fau/defaults.hpp"

#include <algorithm>
#include <cmath>

namespace ferx::fau {

std::string_view modality_name(Modality m) {
  switch (m) {
    case Modality::text: return "T";
    case Modality::visual: return "V";
    case Modality::visual_text: return "VT";
  }
  return "?";
}

std::optional<Modality> parse_modality(std::string_view s) {
  for (const Modality m : {Modality::text, Modality::visual, Modality::visual_text}) {
    if (modality_name(m) == s) return m;
  }
  return std::nullopt;
}

std::vector<std::string> textual_explanation(const FauActivations& act, const FauVocabulary& vocab) {
  std::vector<std::string> out;
  for (int k = 0; k < nn::kFauCount; ++k) {
    if (act.active[k]) out.push_back(vocab[k].phrase);
  }
  return out;
}

int stroke_thickness(int width, int height) {
  return std::max(1, static_cast<int>(std::floor(3.0 * std::min(width, height) / 48.0 + 0.5)));
}

imaging::BinaryMask visual_explanation(const FauActivations& act, const LandmarkSet& landmarks,
                                       const FauVocabulary& vocab, int width, int height) {
  return visual_explanation(act, landmarks, vocab, width, height, stroke_thickness(width, height));
}

imaging::BinaryMask visual_explanation(const FauActivations& act, const LandmarkSet& landmarks,
                                       const FauVocabulary& vocab, int width, int height, int thickness_px) {
  if (width < 1 || height < 1) throw LandmarkError("image dimensions must be positive");
  landmarks.check_bounds(width, height);
  imaging::BinaryMask mask = imaging::BinaryMask::Constant(height, width, false);
  for (int k = 0; k < nn::kFauCount; ++k) {
    if (!act.active[k]) continue;
    const FauEntry& e = vocab[k];
    for (const auto& stroke : e.strokes) {
      std::vector<imaging::Point> pts;
      pts.reserve(stroke.size());
      for (const int i : stroke) pts.push_back(landmarks.points[i]);
      imaging::draw_polyline(mask, pts, e.topology == Topology::closed, thickness_px);
    }
  }
  return mask;
}

DefaultsExplanation defaults_explanation(const FauActivations& act, const LandmarkSet* landmarks,
                                         const FauVocabulary& vocab, Modality mode, int width, int height) {
  DefaultsExplanation out;
  if (mode != Modality::text) {
    if (landmarks == nullptr) {
      throw LandmarkError("modality " + std::string(modality_name(mode)) + " needs landmarks");
    }
    out.mask = visual_explanation(act, *landmarks, vocab, width, height);
  }
  if (mode != Modality::visual) out.phrases = textual_explanation(act, vocab);
  return out;
}

}  // namespace ferx::fau
