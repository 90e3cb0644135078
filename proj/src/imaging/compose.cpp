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

#include "ferx/imaging/compose.hpp"

#include <cmath>
#include <cstdlib>

namespace ferx::imaging {

RgbImage overlay(const GrayImage& image, const BinaryMask& mask, Rgb color, double alpha) {
  if (image.rows() != mask.rows() || image.cols() != mask.cols()) {
    throw ImageError("mask " + dims_string(mask.cols(), mask.rows()) + " does not match image " +
                     dims_string(image.cols(), image.rows()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ImageError("alpha must lie in [0, 1]");
  RgbImage out = to_rgb(image);
  for (Eigen::Index y = 0; y < image.rows(); ++y) {
    for (Eigen::Index x = 0; x < image.cols(); ++x) {
      if (!mask(y, x)) continue;
      const double g = image(y, x);
      Rgb c;
      for (int k = 0; k < 3; ++k) {
        const double v = std::floor(alpha * color[k] + (1.0 - alpha) * g + 0.5);
        c[k] = static_cast<std::uint8_t>(v);
      }
      out.set(static_cast<int>(x), static_cast<int>(y), c);
    }
  }
  return out;
}

RgbImage side_by_side(const RgbImage& left, const RgbImage& right, int gutter_px) {
  if (left.height() != right.height()) {
    throw ImageError("heights differ: " + std::to_string(left.height()) + " vs " + std::to_string(right.height()));
  }
  if (gutter_px < 0) throw ImageError("gutter must be non-negative");
  RgbImage out(left.width() + gutter_px + right.width(), left.height(), Rgb{255, 255, 255});
  for (int y = 0; y < left.height(); ++y) {
    for (int x = 0; x < left.width(); ++x) out.set(x, y, left.at(x, y));
    for (int x = 0; x < right.width(); ++x) out.set(left.width() + gutter_px + x, y, right.at(x, y));
  }
  return out;
}

std::vector<Point> line_points(Point a, Point b) {
  std::vector<Point> pts;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Point p = a;
  for (;;) {
    pts.push_back(p);
    if (p == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return pts;
}

void draw_polyline(BinaryMask& mask, const std::vector<Point>& points, bool closed, int thickness_px) {
  if (points.size() < 2) throw ImageError("polyline needs at least 2 points");
  if (thickness_px < 1) throw ImageError("thickness must be at least 1");
  const auto w = static_cast<int>(mask.cols());
  const auto h = static_cast<int>(mask.rows());
  for (const Point& p : points) {
    if (p.x < 0 || p.y < 0 || p.x >= w || p.y >= h) {
      throw ImageError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") outside " +
                       dims_string(w, h));
    }
  }
  const int lo = -(thickness_px - 1) / 2;
  const int hi = thickness_px / 2;
  auto stamp = [&](Point c) {
    for (int oy = lo; oy <= hi; ++oy) {
      for (int ox = lo; ox <= hi; ++ox) {
        const int x = c.x + ox;
        const int y = c.y + oy;
        if (x >= 0 && y >= 0 && x < w && y < h) mask(y, x) = true;
      }
    }
  };
  const std::size_t segments = closed ? points.size() : points.size() - 1;
  for (std::size_t i = 0; i < segments; ++i) {
    for (const Point& p : line_points(points[i], points[(i + 1) % points.size()])) stamp(p);
  }
}

}  // namespace ferx::imaging
