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

#include <vector>

#include "ferx/imaging/image.hpp"

namespace ferx::imaging {

// Masked pixels become floor(alpha*color + (1-alpha)*gray + 0.5) per channel;
// the rest replicate the gray value.
RgbImage overlay(const GrayImage& image, const BinaryMask& mask, Rgb color, double alpha);

// Horizontal concatenation separated by a white gutter.
RgbImage side_by_side(const RgbImage& left, const RgbImage& right, int gutter_px);

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

// Bresenham walk from a to b, both ends included.
std::vector<Point> line_points(Point a, Point b);

// Rasterizes consecutive segments (and last to first when closed), then
// dilates with a thickness x thickness square. Pixels pushed outside the
// mask by the dilation are dropped.
void draw_polyline(BinaryMask& mask, const std::vector<Point>& points, bool closed, int thickness_px);

}  // namespace ferx::imaging
