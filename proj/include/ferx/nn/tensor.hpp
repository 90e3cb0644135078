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
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ferx::nn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Raised for malformed network inputs (wrong shape, non-finite values).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string shape_string(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

// Dense row-major tensor. shape product always equals data length.
template <typename Scalar>
class Tensor {
 public:
  Tensor() = default;

  Tensor(std::vector<int> shape, Vector<Scalar> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) throw InputError("tensor shape must have at least one dimension");
    long long n = 1;
    for (const int d : shape_) {
      if (d <= 0) throw InputError("tensor dimensions must be positive: " + shape_string(shape_));
      n *= d;
    }
    if (n != data_.size()) {
      throw InputError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + shape_string(shape_));
    }
  }

  static Tensor zeros(std::vector<int> shape) {
    const long long n = std::accumulate(shape.begin(), shape.end(), 1LL, std::multiplies<>());
    return Tensor(std::move(shape), Vector<Scalar>::Zero(n > 0 ? n : 0));
  }

  const std::vector<int>& shape() const { return shape_; }
  const Vector<Scalar>& data() const { return data_; }
  Vector<Scalar>& data() { return data_; }
  Eigen::Index size() const { return data_.size(); }

  // Row-major 2-D access; only meaningful for rank-2 tensors.
  Scalar& at(int row, int col) { return data_[static_cast<Eigen::Index>(row) * shape_.back() + col]; }
  Scalar at(int row, int col) const {
    return data_[static_cast<Eigen::Index>(row) * shape_.back() + col];
  }

  bool all_finite() const { return data_.allFinite(); }

  template <typename To>
  Tensor<To> cast() const {
    return Tensor<To>(shape_, data_.template cast<To>());
  }

  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  std::vector<int> shape_;
  Vector<Scalar> data_;
};

}  // namespace ferx::nn
