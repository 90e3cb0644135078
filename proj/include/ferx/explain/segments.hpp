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
#include <stdexcept>
#include <vector>

namespace ferx::explain {

class ExplainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Segment id per pixel, (y, x) indexed; ids are contiguous in [0, count).
struct SegmentMap {
  int width = 0;
  int height = 0;
  int count = 0;
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> ids;

  // Pixel count of each segment.
  std::vector<long> areas() const;
};

// Regular grid of cell_size squares. The last column and row absorb the
// remainder, so a 50x50 image with cell 8 has 6x6 cells, the outer ones 10
// wide.
SegmentMap segment_grid(int height, int width, int cell_size);

}  // namespace ferx::explain
