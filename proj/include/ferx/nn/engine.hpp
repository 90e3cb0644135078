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
#include <cmath>
#include <string>
#include <vector>

#include "ferx/nn/network.hpp"
#include "ferx/nn/tensor.hpp"

namespace ferx::nn {

// Activations recorded during a forward pass. values[0] is the input batch,
// values[i + 1] the output of layer i; each column is one sample.
template <typename Scalar>
struct Trace {
  std::vector<Matrix<Scalar>> values;
  std::vector<Eigen::MatrixXi> argmax;  // per layer, populated for max-pool only
};

template <typename Scalar>
struct ParamGrad {
  Matrix<Scalar> weights;
  Vector<Scalar> bias;
};

// One entry per layer; parameter-free layers keep empty matrices.
template <typename Scalar>
using Gradients = std::vector<ParamGrad<Scalar>>;

namespace detail {

template <typename Scalar>
void im2col(const Scalar* x, const Geometry& in, int kernel, int stride, const Geometry& out,
            Matrix<Scalar>& cols) {
  const Eigen::Index spatial = static_cast<Eigen::Index>(out.height) * out.width;
  cols.resize(static_cast<Eigen::Index>(in.channels) * kernel * kernel, spatial);
  for (int c = 0; c < in.channels; ++c) {
    const Scalar* plane = x + static_cast<Eigen::Index>(c) * in.height * in.width;
    for (int ky = 0; ky < kernel; ++ky) {
      for (int kx = 0; kx < kernel; ++kx) {
        const Eigen::Index row = (static_cast<Eigen::Index>(c) * kernel + ky) * kernel + kx;
        for (int oy = 0; oy < out.height; ++oy) {
          const Scalar* src = plane + static_cast<Eigen::Index>(oy * stride + ky) * in.width + kx;
          for (int ox = 0; ox < out.width; ++ox) {
            cols(row, static_cast<Eigen::Index>(oy) * out.width + ox) = src[ox * stride];
          }
        }
      }
    }
  }
}

template <typename Scalar>
void col2im_add(const Matrix<Scalar>& cols, const Geometry& in, int kernel, int stride, const Geometry& out,
                Scalar* dx) {
  for (int c = 0; c < in.channels; ++c) {
    Scalar* plane = dx + static_cast<Eigen::Index>(c) * in.height * in.width;
    for (int ky = 0; ky < kernel; ++ky) {
      for (int kx = 0; kx < kernel; ++kx) {
        const Eigen::Index row = (static_cast<Eigen::Index>(c) * kernel + ky) * kernel + kx;
        for (int oy = 0; oy < out.height; ++oy) {
          Scalar* dst = plane + static_cast<Eigen::Index>(oy * stride + ky) * in.width + kx;
          for (int ox = 0; ox < out.width; ++ox) {
            dst[ox * stride] += cols(row, static_cast<Eigen::Index>(oy) * out.width + ox);
          }
        }
      }
    }
  }
}

// Column-wise softmax with 64-bit accumulation.
template <typename Scalar>
Matrix<Scalar> softmax_columns(const Matrix<Scalar>& z) {
  Matrix<Scalar> p(z.rows(), z.cols());
  for (Eigen::Index b = 0; b < z.cols(); ++b) {
    const double m = static_cast<double>(z.col(b).maxCoeff());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) sum += std::exp(static_cast<double>(z(i, b)) - m);
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      p(i, b) = static_cast<Scalar>(std::exp(static_cast<double>(z(i, b)) - m) / sum);
    }
  }
  return p;
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace detail

// Runs a batch (features x samples) through the network. When `trace` is
// given, every intermediate activation is kept for backward_batch.
template <typename Scalar>
Matrix<Scalar> forward_batch(const BasicNetwork<Scalar>& net, const Matrix<Scalar>& batch,
                             Trace<Scalar>* trace = nullptr) {
  if (batch.rows() != net.input_geometry().size()) {
    throw InputError("batch has " + std::to_string(batch.rows()) + " features, network expects " +
                     std::to_string(net.input_geometry().size()));
  }
  const auto& layers = net.layers();
  if (trace) {
    trace->values.assign(1, batch);
    trace->argmax.assign(layers.size(), Eigen::MatrixXi());
  }
  Matrix<Scalar> x = batch;
  Geometry g = net.input_geometry();
  const Eigen::Index n = batch.cols();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Geometry out = net.output_geometry(i);
    Matrix<Scalar> y;
    std::visit(
        detail::overloaded{
            [&](const Conv2d<Scalar>& l) {
              y.resize(out.size(), n);
              Matrix<Scalar> cols;
              for (Eigen::Index b = 0; b < n; ++b) {
                detail::im2col(x.col(b).data(), g, l.kernel, l.stride, out, cols);
                RowMatrix<Scalar> r = l.weights * cols;
                r.colwise() += l.bias;
                y.col(b) = Eigen::Map<const Vector<Scalar>>(r.data(), r.size());
              }
            },
            [&](const Relu&) { y = x.cwiseMax(Scalar(0)); },
            [&](const MaxPool& l) {
              y.resize(out.size(), n);
              Eigen::MatrixXi arg(out.size(), n);
              for (Eigen::Index b = 0; b < n; ++b) {
                for (int c = 0; c < out.channels; ++c) {
                  for (int oy = 0; oy < out.height; ++oy) {
                    for (int ox = 0; ox < out.width; ++ox) {
                      int best = -1;
                      Scalar best_v = Scalar(0);
                      for (int dy = 0; dy < l.size; ++dy) {
                        for (int dx = 0; dx < l.size; ++dx) {
                          const int idx = (c * g.height + oy * l.size + dy) * g.width + ox * l.size + dx;
                          const Scalar v = x(idx, b);
                          if (best < 0 || v > best_v) {
                            best = idx;
                            best_v = v;
                          }
                        }
                      }
                      const Eigen::Index o = (static_cast<Eigen::Index>(c) * out.height + oy) * out.width + ox;
                      y(o, b) = best_v;
                      arg(o, b) = best;
                    }
                  }
                }
              }
              if (trace) trace->argmax[i] = std::move(arg);
            },
            [&](const Flatten&) { y = x; },
            [&](const Dense<Scalar>& l) {
              y.noalias() = l.weights * x;
              y.colwise() += l.bias;
            },
            [&](const Softmax&) { y = detail::softmax_columns(x); },
            [&](const Sigmoid&) { y = x.unaryExpr([](Scalar v) { return detail::sigmoid(v); }); },
        },
        layers[i]);
    x = std::move(y);
    g = out;
    if (trace) trace->values.push_back(x);
  }
  return x;
}

// Propagates `grad` (derivative with respect to the output of layer `from`)
// back to the network input. Parameter gradients are accumulated into
// `params` when provided.
template <typename Scalar>
Matrix<Scalar> backward_batch(const BasicNetwork<Scalar>& net, const Trace<Scalar>& trace, Matrix<Scalar> grad,
                              int from, Gradients<Scalar>* params = nullptr) {
  const auto& layers = net.layers();
  if (params && params->size() != layers.size()) params->resize(layers.size());
  for (int i = from; i >= 0; --i) {
    const Matrix<Scalar>& x = trace.values[i];
    const Matrix<Scalar>& y = trace.values[i + 1];
    const Geometry in = i == 0 ? net.input_geometry() : net.output_geometry(i - 1);
    const Geometry out = net.output_geometry(i);
    const Eigen::Index n = x.cols();
    Matrix<Scalar> dx;
    std::visit(
        detail::overloaded{
            [&](const Conv2d<Scalar>& l) {
              dx = Matrix<Scalar>::Zero(x.rows(), n);
              Matrix<Scalar> cols;
              Matrix<Scalar> dw = Matrix<Scalar>::Zero(l.weights.rows(), l.weights.cols());
              Vector<Scalar> db = Vector<Scalar>::Zero(l.bias.size());
              for (Eigen::Index b = 0; b < n; ++b) {
                Eigen::Map<const RowMatrix<Scalar>> gy(grad.col(b).data(), out.channels,
                                                       static_cast<Eigen::Index>(out.height) * out.width);
                detail::im2col(x.col(b).data(), in, l.kernel, l.stride, out, cols);
                if (params) {
                  dw.noalias() += gy * cols.transpose();
                  db += gy.rowwise().sum();
                }
                Matrix<Scalar> dcols = l.weights.transpose() * gy;
                detail::col2im_add(dcols, in, l.kernel, l.stride, out, dx.col(b).data());
              }
              if (params) {
                auto& p = (*params)[i];
                if (p.weights.size() == 0) {
                  p.weights = std::move(dw);
                  p.bias = std::move(db);
                } else {
                  p.weights += dw;
                  p.bias += db;
                }
              }
            },
            [&](const Relu&) { dx = (x.array() > Scalar(0)).select(grad.array(), Scalar(0)).matrix(); },
            [&](const MaxPool&) {
              dx = Matrix<Scalar>::Zero(x.rows(), n);
              const Eigen::MatrixXi& arg = trace.argmax[i];
              for (Eigen::Index b = 0; b < n; ++b) {
                for (Eigen::Index o = 0; o < grad.rows(); ++o) dx(arg(o, b), b) += grad(o, b);
              }
            },
            [&](const Flatten&) { dx = std::move(grad); },
            [&](const Dense<Scalar>& l) {
              if (params) {
                auto& p = (*params)[i];
                if (p.weights.size() == 0) {
                  p.weights.noalias() = grad * x.transpose();
                  p.bias = grad.rowwise().sum();
                } else {
                  p.weights.noalias() += grad * x.transpose();
                  p.bias += grad.rowwise().sum();
                }
              }
              dx.noalias() = l.weights.transpose() * grad;
            },
            [&](const Softmax&) {
              dx.resize(grad.rows(), n);
              for (Eigen::Index b = 0; b < n; ++b) {
                const Scalar dot = grad.col(b).dot(y.col(b));
                dx.col(b) = y.col(b).cwiseProduct(grad.col(b) - Vector<Scalar>::Constant(grad.rows(), dot));
              }
            },
            [&](const Sigmoid&) {
              dx = (grad.array() * y.array() * (Scalar(1) - y.array())).matrix();
            },
        },
        layers[i]);
    grad = std::move(dx);
  }
  return grad;
}

// Validates a caller-supplied tensor and flattens it to an input column.
template <typename Scalar>
Vector<Scalar> input_column(const BasicNetwork<Scalar>& net, const Tensor<Scalar>& input) {
  if (input.shape() != net.input_shape()) {
    throw InputError("input shape " + shape_string(input.shape()) + " does not match network input " +
                     shape_string(net.input_shape()));
  }
  if (!input.all_finite()) throw InputError("input contains non-finite values");
  return input.data();
}

}  // namespace ferx::nn
