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

#include <cstdint>

#include "ferx/core/emotion.hpp"
#include "ferx/nn/network.hpp"

namespace ferx::nn {

inline constexpr int kFeatureWidth = 4032;
inline constexpr int kEmotionClasses = kModelClassCount;

// Bumped whenever make_reference_network changes its layer stack.
inline constexpr int kReferenceArchitectureVersion = 1;

struct ReferenceOptions {
  int height = 48;
  int width = 48;
  int conv1_channels = 8;
  int conv2_channels = 8;
};

// conv5x5 -> relu -> pool2 -> conv3x3 -> relu -> pool2 -> flatten
//   -> dense(4032) -> relu [feature tap] -> dense(8) -> softmax
Network make_reference_network(const ReferenceOptions& options, std::uint64_t seed);

// Throws ShapeError unless `net` has the 8-way softmax output and a
// 4032-wide feature tap fed by a dense layer.
void validate_reference(const Network& net);

}  // namespace ferx::nn
