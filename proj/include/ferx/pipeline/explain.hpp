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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ferx/core/cohort.hpp"
#include "ferx/explain/attribution.hpp"
#include "ferx/fau/landmarks.hpp"
#include "ferx/fau/vocabulary.hpp"
#include "ferx/imaging/image.hpp"
#include "ferx/pipeline/models.hpp"

namespace ferx::pipeline {

enum class ExplainMethod { lime, shap, salmap, fau_t, fau_v, fau_vt };

inline constexpr std::array<ExplainMethod, 6> kAllMethods = {ExplainMethod::lime,  ExplainMethod::shap,
                                                             ExplainMethod::salmap, ExplainMethod::fau_t,
                                                             ExplainMethod::fau_v, ExplainMethod::fau_vt};

std::string_view method_name(ExplainMethod m);  // "lime", "fau-vt", ...
std::optional<ExplainMethod> parse_method(std::string_view s);
std::optional<ExplainMethod> method_for_cohort(Cohort c);  // nullopt for CAI
bool needs_landmarks(ExplainMethod m);
bool needs_fau_head(ExplainMethod m);

struct ExplainOptions {
  double coverage = 0.2;
  int cell_size = 8;
  int lime_samples = 1000;
  int shap_samples = 2048;
  double baseline = 0.5;
  std::uint64_t seed = 0;
  int threads = 1;
  double alpha = imaging::kDefaultAlpha;
  int gutter = 2;
};

struct Explanation {
  ExplainMethod method = ExplainMethod::lime;
  int class_index = 0;
  std::optional<explain::Attribution> attribution;
  std::optional<imaging::BinaryMask> mask;
  std::optional<imaging::RgbImage> overlay;
  std::optional<imaging::RgbImage> composite;  // original | overlay
  std::optional<std::vector<std::string>> phrases;
};

class PipelineError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nn::Tensor<float> image_tensor(const imaging::GrayImage& image);

// class_index < 0 explains the model's own prediction. Throws
// fau::LandmarkError when a visual FAU mode has no landmarks and
// PipelineError when the FAU head is missing.
Explanation explain_image(const ModelPair& models, const fau::FauVocabulary& vocab, const imaging::GrayImage& image,
                          const fau::LandmarkSet* landmarks, ExplainMethod method, const ExplainOptions& options,
                          int class_index = -1);

// Writes attribution.txt, mask.pgm, overlay.ppm, composite.ppm and
// phrases.txt for whichever parts are present. Returns the names written.
std::vector<std::string> write_explanation(const Explanation& e, const std::filesystem::path& dir);

imaging::GrayImage mask_image(const imaging::BinaryMask& mask);

}  // namespace ferx::pipeline
