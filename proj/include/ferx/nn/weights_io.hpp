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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferx/nn/network.hpp"

namespace ferx::nn {

// Weight file layout (all integers and floats little-endian):
//
//   "FERW" | u16 version | u32 channels | u32 height | u32 width
//   | i32 feature_tap | u32 output_width | u32 layer_count
//   | layer_count x (u8 tag | u8 n | n x u32 shape ints)
//   | per parameterised layer: u64 n | n x f32 weights (row-major)
//                              u64 n | n x f32 bias
inline constexpr std::uint16_t kWeightFormatVersion = 1;

enum class WeightFileErrc {
  io_error = 1,
  bad_magic,
  unsupported_version,
  truncated,
  bad_descriptor,
  shape_mismatch,
  trailing_data,
};

const char* to_string(WeightFileErrc code);

class WeightFileError : public std::runtime_error {
 public:
  WeightFileError(WeightFileErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  WeightFileErrc code() const { return code_; }

 private:
  WeightFileErrc code_;
};

std::vector<std::uint8_t> encode_weights(const Network& net);
Network decode_weights(std::span<const std::uint8_t> bytes);

void save_weights(const Network& net, const std::filesystem::path& path);
Network load_weights(const std::filesystem::path& path);

}  // namespace ferx::nn
