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

#include "ferx/explain/segments.hpp"

#include <algorithm>
#include <string>

namespace ferx::explain {

std::vector<long> SegmentMap::areas() const {
  std::vector<long> out(count, 0);
  for (Eigen::Index i = 0; i < ids.size(); ++i) ++out[ids.data()[i]];
  return out;
}

SegmentMap segment_grid(int height, int width, int cell_size) {
  if (height < 1 || width < 1) throw ExplainError("image dimensions must be positive");
  if (cell_size < 1 || cell_size > std::min(height, width)) {
    throw ExplainError("cell size " + std::to_string(cell_size) + " outside [1, " +
                       std::to_string(std::min(height, width)) + "]");
  }
  const int cols = width / cell_size;
  const int rows = height / cell_size;
  if (cols * rows < 2) {
    throw ExplainError("cell size " + std::to_string(cell_size) + " yields " + std::to_string(cols * rows) +
                       " segment; need at least 2");
  }
  SegmentMap map;
  map.width = width;
  map.height = height;
  map.count = cols * rows;
  map.ids.resize(height, width);
  for (int y = 0; y < height; ++y) {
    const int cy = std::min(y / cell_size, rows - 1);
    for (int x = 0; x < width; ++x) map.ids(y, x) = cy * cols + std::min(x / cell_size, cols - 1);
  }
  return map;
}

}  // namespace ferx::explain
