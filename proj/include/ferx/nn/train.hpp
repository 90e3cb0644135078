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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ferx/core/random.hpp"
#include "ferx/nn/engine.hpp"
#include "ferx/nn/predict.hpp"

namespace ferx::nn {

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 10;
  int batch_size = 16;
  std::uint64_t seed = 0;
  double weight_decay = 0.0;
  double momentum = 0.9;

  void validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
    if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight decay must be non-negative");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
  }
};

// Inputs paired with target vectors: one-hot for softmax heads, 0/1 per
// output for sigmoid heads, raw values otherwise.
template <typename Scalar>
struct LabeledSet {
  std::vector<Tensor<Scalar>> inputs;
  std::vector<Vector<Scalar>> targets;

  std::size_t size() const { return inputs.size(); }
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

template <typename Scalar>
struct TrainResult {
  BasicNetwork<Scalar> network;
  std::vector<EpochStats> trace;
};

// He-uniform weights and zero biases, drawn in layer order from `seed`.
template <typename Scalar>
void initialize(BasicNetwork<Scalar>& net, std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&](Matrix<Scalar>& w, Eigen::Index fan_in) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = static_cast<Scalar>((2.0 * rng.uniform01() - 1.0) * limit);
    }
  };
  for (auto& layer : net.mutable_layers()) {
    if (auto* c = std::get_if<Conv2d<Scalar>>(&layer)) {
      fill(c->weights, c->weights.cols());
      c->bias.setZero();
    } else if (auto* d = std::get_if<Dense<Scalar>>(&layer)) {
      fill(d->weights, d->in);
      d->bias.setZero();
    }
  }
}

namespace detail {

enum class LossKind { cross_entropy, binary_cross_entropy, squared_error };

template <typename Scalar>
LossKind loss_kind(const BasicNetwork<Scalar>& net) {
  if (!net.has_output_activation()) return LossKind::squared_error;
  return kind_of<Scalar>(net.layers().back()) == LayerKind::softmax ? LossKind::cross_entropy
                                                                     : LossKind::binary_cross_entropy;
}

// Loss summed over the batch (64-bit) and per-sample correctness count.
template <typename Scalar>
std::pair<double, double> batch_loss(LossKind kind, const Matrix<Scalar>& out, const Matrix<Scalar>& target) {
  double loss = 0.0;
  double correct = 0.0;
  constexpr double eps = 1e-12;
  for (Eigen::Index b = 0; b < out.cols(); ++b) {
    switch (kind) {
      case LossKind::cross_entropy: {
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
          if (target(i, b) != Scalar(0)) {
            loss -= static_cast<double>(target(i, b)) * std::log(std::max(static_cast<double>(out(i, b)), eps));
          }
        }
        Eigen::Index p, t;
        out.col(b).maxCoeff(&p);
        target.col(b).maxCoeff(&t);
        correct += p == t ? 1.0 : 0.0;
        break;
      }
      case LossKind::binary_cross_entropy: {
        double hits = 0.0;
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
          const double p = std::clamp(static_cast<double>(out(i, b)), eps, 1.0 - eps);
          const double y = static_cast<double>(target(i, b));
          loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
          hits += ((p > 0.5) == (y > 0.5)) ? 1.0 : 0.0;
        }
        correct += hits / static_cast<double>(out.rows());
        break;
      }
      case LossKind::squared_error: {
        loss += 0.5 * (out.col(b) - target.col(b)).template cast<double>().squaredNorm();
        break;
      }
    }
  }
  return {loss, correct};
}

}  // namespace detail

// Fraction of samples classified correctly: argmax match for softmax heads,
// mean per-output threshold agreement for sigmoid heads.
template <typename Scalar>
double accuracy(const BasicNetwork<Scalar>& net, const LabeledSet<Scalar>& data, int chunk = 64) {
  if (data.size() == 0) throw std::invalid_argument("empty dataset");
  const auto kind = detail::loss_kind(net);
  double correct = 0.0;
  for (std::size_t start = 0; start < data.size(); start += chunk) {
    const std::size_t end = std::min(data.size(), start + chunk);
    Matrix<Scalar> x(net.input_geometry().size(), static_cast<Eigen::Index>(end - start));
    Matrix<Scalar> t(net.output_width(), static_cast<Eigen::Index>(end - start));
    for (std::size_t i = start; i < end; ++i) {
      x.col(i - start) = input_column(net, data.inputs[i]);
      t.col(i - start) = data.targets[i];
    }
    correct += detail::batch_loss(kind, forward_batch(net, x), t).second;
  }
  return correct / static_cast<double>(data.size());
}

// Mini-batch SGD with momentum. Single-threaded and deterministic: the
// shuffle order is drawn from cfg.seed.
template <typename Scalar>
TrainResult<Scalar> train(BasicNetwork<Scalar> net, const LabeledSet<Scalar>& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw std::invalid_argument("empty dataset");
  if (data.targets.size() != data.inputs.size()) throw std::invalid_argument("inputs and targets differ in count");
  for (std::size_t i = 0; i < data.size(); ++i) {
    input_column(net, data.inputs[i]);
    if (data.targets[i].size() != net.output_width()) {
      throw ShapeError("target " + std::to_string(i) + " has width " + std::to_string(data.targets[i].size()) +
                       ", network outputs " + std::to_string(net.output_width()));
    }
  }

  const auto kind = detail::loss_kind(net);
  const std::size_t n_layers = net.layers().size();
  Gradients<Scalar> velocity(n_layers);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(cfg.seed);
  TrainResult<Scalar> result;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    double epoch_correct = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const auto n = static_cast<Eigen::Index>(end - start);
      Matrix<Scalar> x(net.input_geometry().size(), n);
      Matrix<Scalar> t(net.output_width(), n);
      for (std::size_t i = start; i < end; ++i) {
        x.col(i - start) = data.inputs[order[i]].data();
        t.col(i - start) = data.targets[order[i]];
      }
      Trace<Scalar> trace;
      const Matrix<Scalar> out = forward_batch(net, x, &trace);
      const auto [loss, correct] = detail::batch_loss(kind, out, t);
      epoch_loss += loss;
      epoch_correct += correct;

      // Softmax+CE and sigmoid+BCE share the (p - y) gradient at the logits.
      Matrix<Scalar> grad = (out - t) / static_cast<Scalar>(n);
      const int from = kind == detail::LossKind::squared_error ? static_cast<int>(n_layers) - 1 : net.logit_layer();
      Gradients<Scalar> grads(n_layers);
      if (from >= 0) backward_batch(net, trace, std::move(grad), from, &grads);

      const auto lr = static_cast<Scalar>(cfg.learning_rate);
      const auto mu = static_cast<Scalar>(cfg.momentum);
      const auto wd = static_cast<Scalar>(cfg.weight_decay);
      for (std::size_t li = 0; li < n_layers; ++li) {
        auto step = [&](Matrix<Scalar>& w, Vector<Scalar>& b) {
          auto& g = grads[li];
          auto& v = velocity[li];
          if (g.weights.size() == 0) return;
          if (wd != Scalar(0)) g.weights += wd * w;
          if (v.weights.size() == 0) {
            v.weights = Matrix<Scalar>::Zero(w.rows(), w.cols());
            v.bias = Vector<Scalar>::Zero(b.size());
          }
          v.weights = mu * v.weights + g.weights;
          v.bias = mu * v.bias + g.bias;
          w -= lr * v.weights;
          b -= lr * v.bias;
        };
        auto& layer = net.mutable_layers()[li];
        if (auto* c = std::get_if<Conv2d<Scalar>>(&layer)) step(c->weights, c->bias);
        if (auto* d = std::get_if<Dense<Scalar>>(&layer)) step(d->weights, d->bias);
      }
    }
    result.trace.push_back({epoch, epoch_loss / static_cast<double>(data.size()),
                            epoch_correct / static_cast<double>(data.size())});
  }
  result.network = std::move(net);
  return result;
}

}  // namespace ferx::nn
