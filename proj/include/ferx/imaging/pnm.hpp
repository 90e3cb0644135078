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
#include <variant>
#include <vector>

#include "ferx/imaging/image.hpp"

namespace ferx::imaging {

enum class PnmErrc {
  bad_magic,
  unsupported_format,
  bad_header,
  bad_maxval,
  truncated,
  wrong_kind,
  io_error,
};

const char* to_string(PnmErrc code);

class PnmError : public ImageError {
 public:
  PnmError(PnmErrc code, const std::string& detail)
      : ImageError(std::string(to_string(code)) + ": " + detail), code_(code) {}
  PnmErrc code() const { return code_; }

 private:
  PnmErrc code_;
};

using AnyImage = std::variant<GrayImage, RgbImage>;

// Binary P5/P6 with maxval 255. Header comments are accepted; bytes after
// the raster are ignored, as netpbm allows concatenated images.
AnyImage read_pnm(std::span<const std::uint8_t> bytes);

// Canonical "P5\n<w> <h>\n255\n" header (P6 alike).
std::vector<std::uint8_t> write_pnm(const GrayImage& image);
std::vector<std::uint8_t> write_pnm(const RgbImage& image);

// Error with wrong_kind when the file holds the other image type.
GrayImage read_pgm_file(const std::filesystem::path& path);
RgbImage read_ppm_file(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// 24-bit uncompressed BMP, for browsers.
std::vector<std::uint8_t> write_bmp(const RgbImage& image);

}  // namespace ferx::imaging
