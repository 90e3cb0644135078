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
#include <optional>
#include <string_view>

namespace ferx {

// Model class order. The first seven are the survey emotions; contempt is
// carried by the classifier only.
enum class Emotion : int {
  neutral = 0,
  anger = 1,
  sadness = 2,
  happiness = 3,
  fear = 4,
  surprise = 5,
  disgust = 6,
  contempt = 7,
};

inline constexpr int kModelClassCount = 8;
inline constexpr int kSurveyEmotionCount = 7;

inline constexpr std::array<std::string_view, kModelClassCount> kEmotionNames = {
    "neutral", "anger", "sadness", "happiness", "fear", "surprise", "disgust", "contempt"};

constexpr std::string_view emotion_name(Emotion e) {
  return kEmotionNames[static_cast<int>(e)];
}

// Survey answers are restricted to the first seven names.
inline std::optional<Emotion> parse_survey_emotion(std::string_view name) {
  for (int i = 0; i < kSurveyEmotionCount; ++i) {
    if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

inline std::optional<Emotion> parse_model_emotion(std::string_view name) {
  for (int i = 0; i < kModelClassCount; ++i) {
    if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

}  // namespace ferx
