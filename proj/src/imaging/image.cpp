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

#include "ferx/imaging/image.hpp"

namespace ferx::imaging {

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw ImageError("image dimensions must be positive, got " + dims_string(width, height));
  samples_.resize(3 * static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < samples_.size(); i += 3) {
    samples_[i] = fill[0];
    samples_[i + 1] = fill[1];
    samples_[i + 2] = fill[2];
  }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width < 1 || height < 1) throw ImageError("image dimensions must be positive, got " + dims_string(width, height));
  if (samples_.size() != 3 * static_cast<std::size_t>(width) * height) {
    throw ImageError("RGB sample count " + std::to_string(samples_.size()) + " does not match " +
                     dims_string(width, height));
  }
}

RgbImage to_rgb(const GrayImage& gray) {
  RgbImage out(static_cast<int>(gray.cols()), static_cast<int>(gray.rows()));
  for (Eigen::Index y = 0; y < gray.rows(); ++y) {
    for (Eigen::Index x = 0; x < gray.cols(); ++x) {
      const std::uint8_t v = gray(y, x);
      out.set(static_cast<int>(x), static_cast<int>(y), {v, v, v});
    }
  }
  return out;
}

GrayImage upscale_nearest(const GrayImage& image, int factor) {
  if (factor < 1) throw ImageError("upscale factor must be positive");
  GrayImage out(image.rows() * factor, image.cols() * factor);
  for (Eigen::Index y = 0; y < out.rows(); ++y) {
    for (Eigen::Index x = 0; x < out.cols(); ++x) out(y, x) = image(y / factor, x / factor);
  }
  return out;
}

RgbImage upscale_nearest(const RgbImage& image, int factor) {
  if (factor < 1) throw ImageError("upscale factor must be positive");
  RgbImage out(image.width() * factor, image.height() * factor);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.set(x, y, image.at(x / factor, y / factor));
  }
  return out;
}

}  // namespace ferx::imaging
