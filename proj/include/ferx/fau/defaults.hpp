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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ferx/fau/landmarks.hpp"
#include "ferx/fau/vocabulary.hpp"
#include "ferx/imaging/image.hpp"

namespace ferx::fau {

using nn::FauActivations;

enum class Modality { text, visual, visual_text };

std::string_view modality_name(Modality m);
std::optional<Modality> parse_modality(std::string_view s);

// Phrases of the active AUs in vocabulary order.
std::vector<std::string> textual_explanation(const FauActivations& act, const FauVocabulary& vocab);

// 3 px at 48x48, scaled linearly with the smaller side.
int stroke_thickness(int width, int height);

// Union of the active AUs' contours.
imaging::BinaryMask visual_explanation(const FauActivations& act, const LandmarkSet& landmarks,
                                       const FauVocabulary& vocab, int width, int height);
imaging::BinaryMask visual_explanation(const FauActivations& act, const LandmarkSet& landmarks,
                                       const FauVocabulary& vocab, int width, int height, int thickness_px);

struct DefaultsExplanation {
  std::optional<std::vector<std::string>> phrases;
  std::optional<imaging::BinaryMask> mask;
};

// Landmarks may be null for the text modality only.
DefaultsExplanation defaults_explanation(const FauActivations& act, const LandmarkSet* landmarks,
                                         const FauVocabulary& vocab, Modality mode, int width, int height);

}  // namespace ferx::fau
