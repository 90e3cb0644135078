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

#include "ferx/fau/landmarks.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

namespace ferx::fau {

void LandmarkSet::check_bounds(int width, int height) const {
  for (int i = 0; i < kLandmarkCount; ++i) {
    const auto& p = points[i];
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw LandmarkError("landmark " + std::to_string(i) + " at (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ") lies outside " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
  }
}

LandmarkSet parse_landmarks(std::string_view text) {
  LandmarkSet set;
  std::istringstream in{std::string(text)};
  std::string line;
  int count = 0;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (count == kLandmarkCount) throw LandmarkError("more than 68 landmarks (line " + std::to_string(number) + ")");
    std::istringstream fields(line);
    std::string xs, ys, extra;
    fields >> xs >> ys;
    if (ys.empty() || (fields >> extra)) {
      throw LandmarkError("line " + std::to_string(number) + ": expected \"x y\"");
    }
    auto parse = [&](const std::string& s) {
      int v = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw LandmarkError("line " + std::to_string(number) + ": '" + s + "' is not an integer");
      }
      return v;
    };
    set.points[count++] = {parse(xs), parse(ys)};
  }
  if (count != kLandmarkCount) throw LandmarkError("expected 68 landmarks, got " + std::to_string(count));
  return set;
}

LandmarkSet load_landmarks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LandmarkError("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_landmarks(text);
}

std::string serialize_landmarks(const LandmarkSet& landmarks) {
  std::string out;
  for (const auto& p : landmarks.points) out += std::to_string(p.x) + " " + std::to_string(p.y) + "\n";
  return out;
}

LandmarkSet canonical_landmarks(int width, int height) {
  if (width < 2 || height < 2) throw LandmarkError("template needs at least 2x2 pixels");
  std::array<std::array<double, 2>, kLandmarkCount> n{};
  for (int i = 0; i <= 16; ++i) {
    const double t = std::numbers::pi * i / 16.0;
    n[i] = {0.5 - 0.38 * std::cos(t), 0.30 + 0.62 * std::sin(t)};
  }
  for (int j = 0; j < 5; ++j) {
    const double lift = 0.04 * std::sin(std::numbers::pi * j / 4.0);
    n[17 + j] = {0.20 + 0.06 * j, 0.26 - lift};
    n[22 + j] = {0.56 + 0.06 * j, 0.26 - lift};
  }
  for (int j = 0; j < 4; ++j) n[27 + j] = {0.5, 0.34 + 0.07 * j};
  for (int j = 0; j < 5; ++j) n[31 + j] = {0.42 + 0.04 * j, j == 2 ? 0.62 : 0.60};
  const double eye[6][2] = {{-0.07, 0.0}, {-0.03, -0.025}, {0.03, -0.025}, {0.07, 0.0}, {0.03, 0.025}, {-0.03, 0.025}};
  for (int j = 0; j < 6; ++j) {
    n[36 + j] = {0.32 + eye[j][0], 0.36 + eye[j][1]};
    n[42 + j] = {0.68 + eye[j][0], 0.36 + eye[j][1]};
  }
  const double outer[12][2] = {{0.36, 0.75}, {0.41, 0.715}, {0.46, 0.70}, {0.50, 0.705}, {0.54, 0.70}, {0.59, 0.715},
                               {0.64, 0.75}, {0.59, 0.795}, {0.54, 0.81}, {0.50, 0.815}, {0.46, 0.81}, {0.41, 0.795}};
  for (int j = 0; j < 12; ++j) n[48 + j] = {outer[j][0], outer[j][1]};
  const double inner[8][2] = {{0.39, 0.75}, {0.45, 0.735}, {0.50, 0.735}, {0.55, 0.735},
                              {0.61, 0.75}, {0.55, 0.77},  {0.50, 0.77},  {0.45, 0.77}};
  for (int j = 0; j < 8; ++j) n[60 + j] = {inner[j][0], inner[j][1]};

  LandmarkSet set;
  for (int i = 0; i < kLandmarkCount; ++i) {
    set.points[i] = {static_cast<int>(std::floor(n[i][0] * (width - 1) + 0.5)),
                     static_cast<int>(std::floor(n[i][1] * (height - 1) + 0.5))};
  }
  return set;
}

}  // namespace ferx::fau
