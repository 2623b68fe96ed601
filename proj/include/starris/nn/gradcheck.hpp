// SPDX-License-Identifier: Apache-2.0
//
// Central finite-difference verification of tape gradients.

#pragma once

#include "starris/nn/network.hpp"

#include <functional>
#include <string>
#include <vector>

namespace starris::nn {

struct GradcheckReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // "input k entry j"

  bool passed(double tol) const { return max_rel_error <= tol; }
};

// Builds a scalar loss from differentiable leaves holding `inputs`.
using LossBuilder = std::function<Graph::Id(Graph&, const std::vector<Graph::Id>&)>;

// Compares backward() against (f(x+h) - f(x-h)) / 2h for every entry of every
// input. Relative error uses max(|analytic|, |numeric|, floor) as denominator.
GradcheckReport gradcheck(const LossBuilder& build, std::vector<Tensor> inputs, double h = 1e-5,
                          double floor = 1e-6);

// Gradcheck of a whole Q-network: MSE of gathered Q values against random
// targets on a random batch, differentiated w.r.t. every parameter.
GradcheckReport gradcheck_network(const NetworkSpec& spec, std::uint64_t seed, int batch = 3, double h = 1e-5);

}  // namespace starris::nn
