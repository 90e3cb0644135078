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
#include <stdexcept>
#include <string>
#include <string_view>

#include "ferx/fau/vocabulary.hpp"
#include "ferx/imaging/compose.hpp"

namespace ferx::fau {

class LandmarkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LandmarkSet {
  std::array<imaging::Point, kLandmarkCount> points{};

  // Throws LandmarkError naming the first point outside width x height.
  void check_bounds(int width, int height) const;

  bool operator==(const LandmarkSet&) const = default;
};

// 68 lines of "x y" integers. Blank lines are ignored.
LandmarkSet parse_landmarks(std::string_view text);
LandmarkSet load_landmarks(const std::filesystem::path& path);
std::string serialize_landmarks(const LandmarkSet& landmarks);

// Frontal template scaled to the image, for synthetic stimuli.
LandmarkSet canonical_landmarks(int width, int height);

}  // namespace ferx::fau
