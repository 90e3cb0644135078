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

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ferx::imaging {

// Indexed (y, x): rows are scanlines.
using GrayImage = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BinaryMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kExplainerHighlight = {255, 255, 0};
inline constexpr Rgb kFauHighlight = {0, 255, 0};
inline constexpr double kDefaultAlpha = 0.6;

class ImageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Interleaved 8-bit RGB, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {0, 0, 0});
  RgbImage(int width, int height, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& samples() const { return samples_; }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {samples_[i], samples_[i + 1], samples_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    samples_[i] = c[0];
    samples_[i + 1] = c[1];
    samples_[i + 2] = c[2];
  }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t index(int x, int y) const { return 3 * (static_cast<std::size_t>(y) * width_ + x); }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

inline std::string dims_string(Eigen::Index width, Eigen::Index height) {
  return std::to_string(width) + "x" + std::to_string(height);
}

RgbImage to_rgb(const GrayImage& gray);

// Upper-left aligned copy scaled by an integer factor, nearest neighbour.
GrayImage upscale_nearest(const GrayImage& image, int factor);
RgbImage upscale_nearest(const RgbImage& image, int factor);

}  // namespace ferx::imaging
