// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major float64 tensor.

#pragma once

#include "starris/common.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace starris::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;

class Tensor {
 public:
  Tensor() = default;
  // Zero-filled.
  explicit Tensor(std::vector<int> shape);
  static Tensor filled(std::vector<int> shape, double v);
  Tensor(std::vector<int> shape, std::vector<double> values);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int k) const { return shape_.at(k); }
  std::size_t size() const { return values_.size(); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  // 2-D access; rank-1 tensors are viewed as a single row.
  int rows() const;
  int cols() const;
  double& at(int r, int c) { return values_[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return values_[static_cast<std::size_t>(r) * cols() + c]; }
  MatMap mat() { return MatMap(values_.data(), rows(), cols()); }
  ConstMatMap mat() const { return ConstMatMap(values_.data(), rows(), cols()); }

  void fill(double v);
  // Same values, new shape of equal element count.
  Tensor reshaped(std::vector<int> shape) const;
  bool all_finite() const;

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
};

std::size_t shape_size(const std::vector<int>& shape);
std::string shape_string(const std::vector<int>& shape);

// Throws NonFiniteValue naming `where` if any entry is NaN or infinite.
void require_finite(const Tensor& t, const char* where);

}  // namespace starris::nn
