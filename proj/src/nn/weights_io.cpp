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

#include "ferx/nn/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ferx::nn {

const char* to_string(WeightFileErrc code) {
  switch (code) {
    case WeightFileErrc::io_error: return "io error";
    case WeightFileErrc::bad_magic: return "bad magic";
    case WeightFileErrc::unsupported_version: return "unsupported version";
    case WeightFileErrc::truncated: return "truncated file";
    case WeightFileErrc::bad_descriptor: return "bad architecture descriptor";
    case WeightFileErrc::shape_mismatch: return "shape mismatch";
    case WeightFileErrc::trailing_data: return "trailing data";
  }
  return "unknown";
}

namespace {

constexpr char kMagic[4] = {'F', 'E', 'R', 'W'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <typename T>
  void le(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void need(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) {
      throw WeightFileError(WeightFileErrc::truncated, std::string("while reading ") + what);
    }
  }
  template <typename T>
  T le(const char* what) {
    using U = std::make_unsigned_t<T>;
    need(sizeof(T), what);
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  float f32(const char* what) { return std::bit_cast<float>(le<std::uint32_t>(what)); }
  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_matrix(Writer& w, const Matrix<float>& m) {
  w.le<std::uint64_t>(static_cast<std::uint64_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) w.f32(m(r, c));
  }
}

void write_vector(Writer& w, const Vector<float>& v) {
  w.le<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) w.f32(v[i]);
}

void read_matrix(Reader& r, Matrix<float>& m, std::size_t layer) {
  const auto n = r.le<std::uint64_t>("weight count");
  if (n != static_cast<std::uint64_t>(m.size())) {
    throw WeightFileError(WeightFileErrc::shape_mismatch,
                          "layer " + std::to_string(layer) + " holds " + std::to_string(n) + " weights, descriptor implies " +
                              std::to_string(m.size()));
  }
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(row, c) = r.f32("weights");
  }
}

void read_vector(Reader& r, Vector<float>& v, std::size_t layer) {
  const auto n = r.le<std::uint64_t>("bias count");
  if (n != static_cast<std::uint64_t>(v.size())) {
    throw WeightFileError(WeightFileErrc::shape_mismatch,
                          "layer " + std::to_string(layer) + " holds " + std::to_string(n) + " biases, descriptor implies " +
                              std::to_string(v.size()));
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = r.f32("bias");
}

}  // namespace

std::vector<std::uint8_t> encode_weights(const Network& net) {
  Writer w;
  w.bytes(kMagic, 4);
  w.le<std::uint16_t>(kWeightFormatVersion);
  const Geometry& in = net.input_geometry();
  w.le<std::uint32_t>(in.channels);
  w.le<std::uint32_t>(in.height);
  w.le<std::uint32_t>(in.width);
  w.le<std::int32_t>(net.feature_tap());
  w.le<std::uint32_t>(net.output_width());
  w.le<std::uint32_t>(static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& layer : net.layers()) {
    w.le<std::uint8_t>(static_cast<std::uint8_t>(kind_of<float>(layer)));
    std::vector<std::uint32_t> ints;
    if (const auto* c = std::get_if<Conv2d<float>>(&layer)) {
      ints = {static_cast<std::uint32_t>(c->in_channels), static_cast<std::uint32_t>(c->out_channels),
              static_cast<std::uint32_t>(c->kernel), static_cast<std::uint32_t>(c->stride)};
    } else if (const auto* d = std::get_if<Dense<float>>(&layer)) {
      ints = {static_cast<std::uint32_t>(d->in), static_cast<std::uint32_t>(d->out)};
    } else if (const auto* p = std::get_if<MaxPool>(&layer)) {
      ints = {static_cast<std::uint32_t>(p->size)};
    }
    w.le<std::uint8_t>(static_cast<std::uint8_t>(ints.size()));
    for (const auto v : ints) w.le<std::uint32_t>(v);
  }
  for (const auto& layer : net.layers()) {
    if (const auto* c = std::get_if<Conv2d<float>>(&layer)) {
      write_matrix(w, c->weights);
      write_vector(w, c->bias);
    } else if (const auto* d = std::get_if<Dense<float>>(&layer)) {
      write_matrix(w, d->weights);
      write_vector(w, d->bias);
    }
  }
  return w.take();
}

Network decode_weights(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw WeightFileError(WeightFileErrc::bad_magic, "expected FERW");
  const auto version = r.le<std::uint16_t>("version");
  if (version != kWeightFormatVersion) {
    throw WeightFileError(WeightFileErrc::unsupported_version, "version " + std::to_string(version));
  }
  Geometry in;
  in.channels = static_cast<int>(r.le<std::uint32_t>("input channels"));
  in.height = static_cast<int>(r.le<std::uint32_t>("input height"));
  in.width = static_cast<int>(r.le<std::uint32_t>("input width"));
  const auto tap = r.le<std::int32_t>("feature tap");
  const auto declared_out = r.le<std::uint32_t>("output width");
  const auto count = r.le<std::uint32_t>("layer count");
  if (count > 4096) throw WeightFileError(WeightFileErrc::bad_descriptor, "implausible layer count");

  constexpr std::uint32_t kMaxDim = 1u << 24;
  std::vector<Layer<float>> layers;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto tag = r.le<std::uint8_t>("layer tag");
    const auto n = r.le<std::uint8_t>("layer int count");
    std::vector<int> ints;
    for (std::uint8_t k = 0; k < n; ++k) {
      const auto v = r.le<std::uint32_t>("layer shape");
      if (v == 0 || v > kMaxDim) {
        throw WeightFileError(WeightFileErrc::bad_descriptor, "layer " + std::to_string(i) + " has invalid dimension");
      }
      ints.push_back(static_cast<int>(v));
    }
    auto expect = [&](std::size_t want) {
      if (ints.size() != want) {
        throw WeightFileError(WeightFileErrc::bad_descriptor, "layer " + std::to_string(i) + " expects " +
                                                                  std::to_string(want) + " shape ints");
      }
    };
    switch (static_cast<LayerKind>(tag)) {
      case LayerKind::conv2d:
        expect(4);
        layers.emplace_back(Conv2d<float>::zeros(ints[0], ints[1], ints[2], ints[3]));
        break;
      case LayerKind::relu: expect(0); layers.emplace_back(Relu{}); break;
      case LayerKind::max_pool: expect(1); layers.emplace_back(MaxPool{ints[0]}); break;
      case LayerKind::flatten: expect(0); layers.emplace_back(Flatten{}); break;
      case LayerKind::dense:
        expect(2);
        layers.emplace_back(Dense<float>::zeros(ints[0], ints[1]));
        break;
      case LayerKind::softmax: expect(0); layers.emplace_back(Softmax{}); break;
      case LayerKind::sigmoid: expect(0); layers.emplace_back(Sigmoid{}); break;
      default:
        throw WeightFileError(WeightFileErrc::bad_descriptor, "unknown layer tag " + std::to_string(tag));
    }
  }

  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (auto* c = std::get_if<Conv2d<float>>(&layers[i])) {
      read_matrix(r, c->weights, i);
      read_vector(r, c->bias, i);
    } else if (auto* d = std::get_if<Dense<float>>(&layers[i])) {
      read_matrix(r, d->weights, i);
      read_vector(r, d->bias, i);
    }
  }
  if (!r.done()) throw WeightFileError(WeightFileErrc::trailing_data, "bytes after final layer");

  try {
    Network net(in, std::move(layers), tap);
    if (static_cast<std::uint32_t>(net.output_width()) != declared_out) {
      throw WeightFileError(WeightFileErrc::shape_mismatch, "header declares " + std::to_string(declared_out) +
                                                                " outputs, layers produce " +
                                                                std::to_string(net.output_width()));
    }
    return net;
  } catch (const ShapeError& e) {
    throw WeightFileError(WeightFileErrc::shape_mismatch, e.what());
  }
}

void save_weights(const Network& net, const std::filesystem::path& path) {
  const auto bytes = encode_weights(net);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WeightFileError(WeightFileErrc::io_error, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WeightFileError(WeightFileErrc::io_error, "write failed for " + path.string());
}

Network load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WeightFileError(WeightFileErrc::io_error, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_weights(bytes);
}

}  // namespace ferx::nn
