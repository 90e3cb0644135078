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
#include <string>
#include <vector>

#include "ferx/nn/engine.hpp"

namespace ferx::nn {

// Output of one forward pass. All vectors are widened to double.
struct EmotionPrediction {
  Eigen::VectorXd probs;
  Eigen::VectorXd logits;
  Eigen::VectorXd features;  // empty when the network has no feature tap
  int argmax_class = 0;
};

enum class GradientTarget { logit, probability };

// Index of the maximum entry; ties go to the lowest index.
inline int argmax_lowest(const Eigen::VectorXd& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

inline Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  const double m = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - m).exp().matrix();
  return e / e.sum();
}

namespace detail {

// Scores and normalized outputs of the columns of a traced batch.
template <typename Scalar>
EmotionPrediction prediction_from_trace(const BasicNetwork<Scalar>& net, const Trace<Scalar>& trace,
                                        Eigen::Index column) {
  EmotionPrediction p;
  const int logit_layer = net.logit_layer();
  p.logits = trace.values[logit_layer + 1].col(column).template cast<double>();
  if (net.has_output_activation()) {
    if (kind_of<Scalar>(net.layers().back()) == LayerKind::softmax) {
      // Recomputed in double so the normalization holds to 1e-12, not 1e-7.
      p.probs = softmax(p.logits);
    } else {
      p.probs = trace.values.back().col(column).template cast<double>();
    }
  } else {
    p.probs = softmax(p.logits);
  }
  if (net.feature_tap() >= 0) {
    p.features = trace.values[net.feature_tap() + 1].col(column).template cast<double>();
  }
  p.argmax_class = argmax_lowest(p.probs);
  return p;
}

}  // namespace detail

// Pure function of weights and input.
template <typename Scalar>
EmotionPrediction forward(const BasicNetwork<Scalar>& net, const Tensor<Scalar>& input) {
  Matrix<Scalar> batch = input_column(net, input);
  Trace<Scalar> trace;
  forward_batch(net, batch, &trace);
  return detail::prediction_from_trace(net, trace, 0);
}

// Batched variant; order of results follows `inputs`.
template <typename Scalar>
std::vector<EmotionPrediction> forward_many(const BasicNetwork<Scalar>& net,
                                            const std::vector<Tensor<Scalar>>& inputs) {
  std::vector<EmotionPrediction> out;
  if (inputs.empty()) return out;
  Matrix<Scalar> batch(net.input_geometry().size(), static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i) batch.col(i) = input_column(net, inputs[i]);
  Trace<Scalar> trace;
  forward_batch(net, batch, &trace);
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back(detail::prediction_from_trace(net, trace, i));
  return out;
}

// Probability of `class_index` for each column of `batch`; the explainers'
// hot path.
template <typename Scalar>
Eigen::VectorXd class_probabilities(const BasicNetwork<Scalar>& net, const Matrix<Scalar>& batch, int class_index) {
  Trace<Scalar> trace;
  forward_batch(net, batch, &trace);
  Eigen::VectorXd out(batch.cols());
  for (Eigen::Index b = 0; b < batch.cols(); ++b) {
    out[b] = detail::prediction_from_trace(net, trace, b).probs[class_index];
  }
  return out;
}

// Exact reverse-mode gradient of the chosen class score with respect to
// every input element.
template <typename Scalar>
Tensor<Scalar> input_gradient(const BasicNetwork<Scalar>& net, const Tensor<Scalar>& input, int class_index,
                              GradientTarget target) {
  if (class_index < 0 || class_index >= net.output_width()) {
    throw std::out_of_range("class index " + std::to_string(class_index) + " outside [0, " +
                            std::to_string(net.output_width()) + ")");
  }
  Matrix<Scalar> batch = input_column(net, input);
  Trace<Scalar> trace;
  forward_batch(net, batch, &trace);
  const int logit_layer = net.logit_layer();
  const Eigen::Index width = net.output_width();
  Matrix<Scalar> seed = Matrix<Scalar>::Zero(width, 1);
  if (target == GradientTarget::logit) {
    seed(class_index, 0) = Scalar(1);
  } else {
    const EmotionPrediction p = detail::prediction_from_trace(net, trace, 0);
    const double pc = p.probs[class_index];
    const bool sigmoid_head =
        net.has_output_activation() && kind_of<Scalar>(net.layers().back()) == LayerKind::sigmoid;
    if (sigmoid_head) {
      seed(class_index, 0) = static_cast<Scalar>(pc * (1.0 - pc));
    } else {
      for (Eigen::Index j = 0; j < width; ++j) {
        seed(j, 0) = static_cast<Scalar>(pc * ((j == class_index ? 1.0 : 0.0) - p.probs[j]));
      }
    }
  }
  Matrix<Scalar> g = logit_layer >= 0 ? backward_batch(net, trace, std::move(seed), logit_layer) : seed;
  return Tensor<Scalar>(input.shape(), Eigen::Map<const Vector<Scalar>>(g.data(), g.size()));
}

}  // namespace ferx::nn
