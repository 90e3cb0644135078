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
#include <cstdint>

#include "ferx/core/emotion.hpp"
#include "ferx/nn/fau_head.hpp"
#include "ferx/nn/train.hpp"

namespace ferx::nn {

// Class-conditional blob images: class c places a Gaussian blob at angle
// 2*pi*c/classes around the image centre, with positional jitter and noise.
LabeledSet<float> make_blob_dataset(int classes, int per_class, int height, int width, std::uint64_t seed);

// Single blob image for a class, values in [0, 1].
Tensor<float> make_blob_image(int class_index, int classes, int height, int width, std::uint64_t seed);

// Prototypical action units per emotion, indexed in default vocabulary
// order (AU1, AU2, AU4, AU5, AU6, AU7, AU9, AU10, AU12, AU15, AU17, AU20,
// AU23, AU25, AU26).
std::array<bool, kFauCount> emotion_fau_prototype(Emotion emotion);

// Head training set: each image runs through `net`; the target is the
// prototype of the image's true class.
LabeledSet<float> make_fau_dataset(const Network& net, const LabeledSet<float>& images);

}  // namespace ferx::nn
