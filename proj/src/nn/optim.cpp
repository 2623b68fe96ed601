// SPDX-License-Identifier: Apache-2.0

#include "starris/nn/optim.hpp"

#include <cmath>

namespace starris::nn {

namespace {

void check_match(const ParamSet& params, const ParamSet& grads) {
  if (params.tensors.size() != grads.tensors.size()) throw ShapeMismatch("optimizer: parameter/gradient count");
  for (std::size_t k = 0; k < params.tensors.size(); ++k)
    if (params.tensors[k].shape() != grads.tensors[k].shape())
      throw ShapeMismatch("optimizer: gradient shape mismatch for " + params.names[k]);
}

}  // namespace

void sgd_step(ParamSet& params, const ParamSet& grads, double lr) {
  check_match(params, grads);
  for (std::size_t k = 0; k < params.tensors.size(); ++k) {
    auto& p = params.tensors[k].values();
    const auto& g = grads.tensors[k].values();
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= lr * g[j];
  }
}

Optimizer::Optimizer(OptimizerKind kind, double lr, double momentum) : kind_(kind), lr_(lr), momentum_(momentum) {}

void Optimizer::step(ParamSet& params, const ParamSet& grads) {
  check_match(params, grads);
  ++t_;
  if (kind_ == OptimizerKind::Sgd) {
    sgd_step(params, grads, lr_);
    return;
  }
  if (m_.tensors.empty()) m_ = params.zeros_like();
  if (kind_ == OptimizerKind::Momentum) {
    for (std::size_t k = 0; k < params.tensors.size(); ++k) {
      auto& p = params.tensors[k].values();
      auto& m = m_.tensors[k].values();
      const auto& g = grads.tensors[k].values();
      for (std::size_t j = 0; j < p.size(); ++j) {
        m[j] = momentum_ * m[j] + g[j];
        p[j] -= lr_ * m[j];
      }
    }
    return;
  }
  if (v_.tensors.empty()) v_ = params.zeros_like();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.tensors.size(); ++k) {
    auto& p = params.tensors[k].values();
    auto& m = m_.tensors[k].values();
    auto& v = v_.tensors[k].values();
    const auto& g = grads.tensors[k].values();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      p[j] -= lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
    }
  }
}

}  // namespace starris::nn
