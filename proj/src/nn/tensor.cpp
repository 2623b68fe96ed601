// SPDX-License-Identifier: Apache-2.0

#include "starris/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace starris::nn {

std::size_t shape_size(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeMismatch("negative dimension in shape " + shape_string(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_string(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(shape[k]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)), values_(shape_size(shape_), 0.0) {}

Tensor Tensor::filled(std::vector<int> shape, double v) {
  Tensor t(std::move(shape));
  t.fill(v);
  return t;
}

Tensor::Tensor(std::vector<int> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_size(shape_))
    throw ShapeMismatch("tensor of shape " + shape_string(shape_) + " given " + std::to_string(values_.size()) +
                        " values");
}

int Tensor::rows() const {
  if (shape_.empty()) return 1;
  if (shape_.size() == 1) return 1;
  return static_cast<int>(values_.size() / static_cast<std::size_t>(shape_.back()));
}

int Tensor::cols() const {
  if (shape_.empty()) return 1;
  return shape_.back();
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (shape_size(shape) != values_.size())
    throw ShapeMismatch("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  return Tensor(std::move(shape), values_);
}

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Tensor& t, const char* where) {
  if (!t.all_finite()) throw NonFiniteValue(std::string("non-finite value in ") + where);
}

}  // namespace starris::nn
