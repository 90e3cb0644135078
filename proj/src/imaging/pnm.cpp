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

#include "ferx/imaging/pnm.hpp"

#include <fstream>
#include <iterator>
#include <string>

namespace ferx::imaging {

const char* to_string(PnmErrc code) {
  switch (code) {
    case PnmErrc::bad_magic: return "bad magic";
    case PnmErrc::unsupported_format: return "unsupported format";
    case PnmErrc::bad_header: return "bad header";
    case PnmErrc::bad_maxval: return "unsupported maxval";
    case PnmErrc::truncated: return "truncated payload";
    case PnmErrc::wrong_kind: return "wrong image kind";
    case PnmErrc::io_error: return "io error";
  }
  return "unknown";
}

namespace {

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> in) : in_(in) {}

  // Skips whitespace and '#' comments, then reads a decimal integer.
  long number(const char* what) {
    for (;;) {
      if (pos_ >= in_.size()) throw PnmError(PnmErrc::truncated, std::string("header ends before ") + what);
      if (is_space(in_[pos_])) {
        ++pos_;
      } else if (in_[pos_] == '#') {
        while (pos_ < in_.size() && in_[pos_] != '\n' && in_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
    if (in_[pos_] < '0' || in_[pos_] > '9') throw PnmError(PnmErrc::bad_header, std::string("expected ") + what);
    long v = 0;
    while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') {
      v = v * 10 + (in_[pos_] - '0');
      if (v > 1'000'000) throw PnmError(PnmErrc::bad_header, std::string(what) + " too large");
      ++pos_;
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= in_.size()) throw PnmError(PnmErrc::truncated, "header ends before raster");
    if (!is_space(in_[pos_])) throw PnmError(PnmErrc::bad_header, "missing separator before raster");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> header(char kind, Eigen::Index w, Eigen::Index h) {
  const std::string s = std::string("P") + kind + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  return {s.begin(), s.end()};
}

}  // namespace

AnyImage read_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw PnmError(PnmErrc::bad_magic, "not a netpbm file");
  const std::uint8_t kind = bytes[1];
  if (kind >= '1' && kind <= '7' && kind != '5' && kind != '6') {
    throw PnmError(PnmErrc::unsupported_format, std::string("P") + static_cast<char>(kind) + " (only P5 and P6)");
  }
  if (kind != '5' && kind != '6') throw PnmError(PnmErrc::bad_magic, "not a netpbm file");
  HeaderReader r(bytes);
  r.skip(2);
  const long w = r.number("width");
  const long h = r.number("height");
  const long maxval = r.number("maxval");
  if (w < 1 || h < 1) throw PnmError(PnmErrc::bad_header, "zero dimension");
  if (maxval != 255) throw PnmError(PnmErrc::bad_maxval, "maxval " + std::to_string(maxval) + ", need 255");
  r.single_space();
  const std::size_t channels = kind == '5' ? 1 : 3;
  const std::size_t n = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() - r.pos() < n) {
    throw PnmError(PnmErrc::truncated,
                   "raster needs " + std::to_string(n) + " bytes, found " + std::to_string(bytes.size() - r.pos()));
  }
  const auto raster = bytes.subspan(r.pos(), n);
  if (kind == '5') {
    GrayImage g(h, w);
    std::copy(raster.begin(), raster.end(), g.data());
    return g;
  }
  return RgbImage(static_cast<int>(w), static_cast<int>(h), std::vector<std::uint8_t>(raster.begin(), raster.end()));
}

std::vector<std::uint8_t> write_pnm(const GrayImage& image) {
  if (image.size() == 0) throw ImageError("cannot write an empty image");
  auto out = header('5', image.cols(), image.rows());
  out.insert(out.end(), image.data(), image.data() + image.size());
  return out;
}

std::vector<std::uint8_t> write_pnm(const RgbImage& image) {
  if (image.samples().empty()) throw ImageError("cannot write an empty image");
  auto out = header('6', image.width(), image.height());
  out.insert(out.end(), image.samples().begin(), image.samples().end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PnmError(PnmErrc::io_error, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PnmError(PnmErrc::io_error, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw PnmError(PnmErrc::io_error, "write failed for " + path.string());
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  auto img = read_pnm(read_file_bytes(path));
  if (auto* g = std::get_if<GrayImage>(&img)) return std::move(*g);
  throw PnmError(PnmErrc::wrong_kind, path.string() + " is RGB, expected grayscale");
}

RgbImage read_ppm_file(const std::filesystem::path& path) {
  auto img = read_pnm(read_file_bytes(path));
  if (auto* c = std::get_if<RgbImage>(&img)) return std::move(*c);
  throw PnmError(PnmErrc::wrong_kind, path.string() + " is grayscale, expected RGB");
}

std::vector<std::uint8_t> write_bmp(const RgbImage& image) {
  const std::uint32_t w = image.width();
  const std::uint32_t h = image.height();
  const std::uint32_t row = (3 * w + 3) & ~3u;
  const std::uint32_t pixels = row * h;
  std::vector<std::uint8_t> out;
  out.reserve(54 + pixels);
  auto u16 = [&](std::uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back(v >> 8);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
  };
  out.push_back('B');
  out.push_back('M');
  u32(54 + pixels);
  u32(0);
  u32(54);
  u32(40);
  u32(w);
  u32(h);
  u16(1);
  u16(24);
  u32(0);
  u32(pixels);
  u32(2835);
  u32(2835);
  u32(0);
  u32(0);
  // Bottom-up rows, BGR order.
  for (std::uint32_t y = h; y-- > 0;) {
    for (std::uint32_t x = 0; x < w; ++x) {
      const Rgb c = image.at(static_cast<int>(x), static_cast<int>(y));
      out.push_back(c[2]);
      out.push_back(c[1]);
      out.push_back(c[0]);
    }
    for (std::uint32_t p = 3 * w; p < row; ++p) out.push_back(0);
  }
  return out;
}

}  // namespace ferx::imaging
