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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ferx/nn/tensor.hpp"

namespace ferx::nn {

// Raised when layer shapes do not compose or parameters disagree with the
// declared layer geometry.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Activation geometry, channel-major (CHW).
struct Geometry {
  int channels = 1;
  int height = 1;
  int width = 1;

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(channels) * height * width;
  }
  bool operator==(const Geometry&) const = default;
};

// Tags double as the on-disk layer identifiers.
enum class LayerKind : std::uint8_t {
  conv2d = 1,
  relu = 2,
  max_pool = 3,
  flatten = 4,
  dense = 5,
  softmax = 6,
  sigmoid = 7,
};

template <typename Scalar>
struct Conv2d {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;
  Matrix<Scalar> weights;  // out_channels x (in_channels * kernel * kernel)
  Vector<Scalar> bias;     // out_channels

  static Conv2d zeros(int in_channels, int out_channels, int kernel, int stride = 1) {
    return {in_channels, out_channels, kernel, stride,
            Matrix<Scalar>::Zero(out_channels, in_channels * kernel * kernel),
            Vector<Scalar>::Zero(out_channels)};
  }
};

template <typename Scalar>
struct Dense {
  int in = 1;
  int out = 1;
  Matrix<Scalar> weights;  // out x in
  Vector<Scalar> bias;     // out

  static Dense zeros(int in, int out) {
    return {in, out, Matrix<Scalar>::Zero(out, in), Vector<Scalar>::Zero(out)};
  }
};

struct Relu {};
struct MaxPool {
  int size = 2;
};
struct Flatten {};
struct Softmax {};
struct Sigmoid {};

template <typename Scalar>
using Layer = std::variant<Conv2d<Scalar>, Relu, MaxPool, Flatten, Dense<Scalar>, Softmax, Sigmoid>;

template <typename Scalar>
LayerKind kind_of(const Layer<Scalar>& layer) {
  return std::visit(
      [](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Conv2d<Scalar>>) return LayerKind::conv2d;
        else if constexpr (std::is_same_v<L, Relu>) return LayerKind::relu;
        else if constexpr (std::is_same_v<L, MaxPool>) return LayerKind::max_pool;
        else if constexpr (std::is_same_v<L, Flatten>) return LayerKind::flatten;
        else if constexpr (std::is_same_v<L, Dense<Scalar>>) return LayerKind::dense;
        else if constexpr (std::is_same_v<L, Softmax>) return LayerKind::softmax;
        else return LayerKind::sigmoid;
      },
      layer);
}

// A feed-forward stack. Immutable once constructed except through
// mutable_layers(), which the trainer uses to update parameters in place.
template <typename Scalar>
class BasicNetwork {
 public:
  using scalar_type = Scalar;
  using layer_type = Layer<Scalar>;

  BasicNetwork() = default;

  // feature_tap names the layer whose output is reported as the feature
  // vector of a prediction; -1 disables it.
  BasicNetwork(Geometry input, std::vector<layer_type> layers, int feature_tap = -1)
      : input_(input), layers_(std::move(layers)), feature_tap_(feature_tap) {
    infer_shapes();
  }

  const Geometry& input_geometry() const { return input_; }
  const std::vector<layer_type>& layers() const { return layers_; }
  std::vector<layer_type>& mutable_layers() { return layers_; }
  const Geometry& output_geometry(std::size_t layer) const { return shapes_.at(layer); }
  int feature_tap() const { return feature_tap_; }

  int output_width() const {
    return static_cast<int>(shapes_.empty() ? input_.size() : shapes_.back().size());
  }

  // Shape a caller must present: {C} for vector inputs, {H, W} for
  // single-channel images, {C, H, W} otherwise.
  std::vector<int> input_shape() const {
    if (input_.height == 1 && input_.width == 1) return {input_.channels};
    if (input_.channels == 1) return {input_.height, input_.width};
    return {input_.channels, input_.height, input_.width};
  }

  bool has_output_activation() const {
    if (layers_.empty()) return false;
    const LayerKind k = kind_of<Scalar>(layers_.back());
    return k == LayerKind::softmax || k == LayerKind::sigmoid;
  }

  // Index of the layer producing pre-activation scores; -1 if the scores
  // are the raw input.
  int logit_layer() const {
    return static_cast<int>(layers_.size()) - (has_output_activation() ? 2 : 1);
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers_) {
      if (const auto* c = std::get_if<Conv2d<Scalar>>(&layer)) n += c->weights.size() + c->bias.size();
      if (const auto* d = std::get_if<Dense<Scalar>>(&layer)) n += d->weights.size() + d->bias.size();
    }
    return n;
  }

  template <typename To>
  BasicNetwork<To> cast() const {
    std::vector<Layer<To>> out;
    out.reserve(layers_.size());
    for (const auto& layer : layers_) {
      std::visit(
          [&](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Conv2d<Scalar>>) {
              out.emplace_back(Conv2d<To>{l.in_channels, l.out_channels, l.kernel, l.stride,
                                          l.weights.template cast<To>(), l.bias.template cast<To>()});
            } else if constexpr (std::is_same_v<L, Dense<Scalar>>) {
              out.emplace_back(
                  Dense<To>{l.in, l.out, l.weights.template cast<To>(), l.bias.template cast<To>()});
            } else {
              out.emplace_back(l);
            }
          },
          layer);
    }
    return BasicNetwork<To>(input_, std::move(out), feature_tap_);
  }

 private:
  void infer_shapes() {
    if (input_.channels <= 0 || input_.height <= 0 || input_.width <= 0) {
      throw ShapeError("input geometry must be positive");
    }
    shapes_.clear();
    Geometry g = input_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const std::string where = "layer " + std::to_string(i) + ": ";
      std::visit(
          [&](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Conv2d<Scalar>>) {
              if (l.in_channels != g.channels) throw ShapeError(where + "conv input channels mismatch");
              if (l.kernel <= 0 || l.stride <= 0 || l.out_channels <= 0) {
                throw ShapeError(where + "conv parameters must be positive");
              }
              if (g.height < l.kernel || g.width < l.kernel) throw ShapeError(where + "conv kernel larger than input");
              if (l.weights.rows() != l.out_channels ||
                  l.weights.cols() != static_cast<Eigen::Index>(l.in_channels) * l.kernel * l.kernel ||
                  l.bias.size() != l.out_channels) {
                throw ShapeError(where + "conv parameter shape mismatch");
              }
              g = {l.out_channels, (g.height - l.kernel) / l.stride + 1, (g.width - l.kernel) / l.stride + 1};
            } else if constexpr (std::is_same_v<L, MaxPool>) {
              if (l.size <= 0 || g.height < l.size || g.width < l.size) {
                throw ShapeError(where + "pool window does not fit input");
              }
              g = {g.channels, g.height / l.size, g.width / l.size};
            } else if constexpr (std::is_same_v<L, Flatten>) {
              g = {static_cast<int>(g.size()), 1, 1};
            } else if constexpr (std::is_same_v<L, Dense<Scalar>>) {
              if (l.in != g.size()) {
                throw ShapeError(where + "dense expects " + std::to_string(l.in) + " inputs, got " +
                                 std::to_string(g.size()));
              }
              if (l.out <= 0 || l.weights.rows() != l.out || l.weights.cols() != l.in || l.bias.size() != l.out) {
                throw ShapeError(where + "dense parameter shape mismatch");
              }
              g = {l.out, 1, 1};
            } else if constexpr (std::is_same_v<L, Softmax> || std::is_same_v<L, Sigmoid>) {
              if (i + 1 != layers_.size()) throw ShapeError(where + "output activation must be the last layer");
            }
          },
          layers_[i]);
      shapes_.push_back(g);
    }
    if (feature_tap_ < -1 || feature_tap_ >= static_cast<int>(layers_.size())) {
      throw ShapeError("feature tap index out of range");
    }
  }

  Geometry input_;
  std::vector<layer_type> layers_;
  std::vector<Geometry> shapes_;
  int feature_tap_ = -1;
};

using Network = BasicNetwork<float>;

}  // namespace ferx::nn
