// SPDX-License-Identifier: Apache-2.0
//
// First-order optimizers over a ParamSet.

#pragma once

#include "starris/nn/network.hpp"
#include "starris/params.hpp"

namespace starris::nn {

// p <- p - lr * g
void sgd_step(ParamSet& params, const ParamSet& grads, double lr);

class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, double lr, double momentum = 0.9);

  void step(ParamSet& params, const ParamSet& grads);
  OptimizerKind kind() const { return kind_; }
  double learning_rate() const { return lr_; }
  long steps() const { return t_; }

 private:
  OptimizerKind kind_ = OptimizerKind::Sgd;
  double lr_ = 1e-3;
  double momentum_ = 0.9;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  ParamSet m_;
  ParamSet v_;
};

}  // namespace starris::nn
