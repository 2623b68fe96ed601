// SPDX-License-Identifier: Apache-2.0

#include "starris/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace starris::nn {

GradcheckReport gradcheck(const LossBuilder& build, std::vector<Tensor> inputs, double h, double floor) {
  auto evaluate = [&](bool with_grad, std::vector<Tensor>* grads) {
    Graph g;
    std::vector<Graph::Id> ids;
    for (auto& t : inputs) ids.push_back(g.leaf(t));
    const Graph::Id loss = build(g, ids);
    const double value = g.value(loss)[0];
    if (with_grad) {
      g.backward(loss);
      grads->clear();
      for (auto id : ids) grads->push_back(g.grad(id));
    }
    return value;
  };

  std::vector<Tensor> analytic;
  evaluate(true, &analytic);

  GradcheckReport rep;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (std::size_t j = 0; j < inputs[k].size(); ++j) {
      const double orig = inputs[k][j];
      inputs[k][j] = orig + h;
      const double up = evaluate(false, nullptr);
      inputs[k][j] = orig - h;
      const double down = evaluate(false, nullptr);
      inputs[k][j] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[k][j];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double err = std::abs(a - numeric) / denom;
      ++rep.checked;
      if (err > rep.max_rel_error || !std::isfinite(err)) {
        rep.max_rel_error = std::isfinite(err) ? err : INFINITY;
        rep.worst = "input " + std::to_string(k) + " entry " + std::to_string(j);
      }
    }
  }
  return rep;
}

GradcheckReport gradcheck_network(const NetworkSpec& spec, std::uint64_t seed, int batch, double h) {
  QNetwork net(spec, seed);
  Rng rng(derive_seed(seed, 0x67c4ec));
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor states({batch, spec.input_size()});
  for (double& v : states.values()) v = normal(rng);
  const int dims = static_cast<int>(spec.head_sizes.size());
  std::vector<int> index;
  Tensor targets({batch, dims});
  for (int b = 0; b < batch; ++b) {
    int offset = 0;
    for (int d = 0; d < dims; ++d) {
      std::uniform_int_distribution<int> pick(0, spec.head_sizes[d] - 1);
      index.push_back(offset + pick(rng));
      offset += spec.head_sizes[d];
      targets.at(b, d) = normal(rng);
    }
  }
  LossBuilder build = [&](Graph& g, const std::vector<Graph::Id>& leaves) {
    const auto in = g.constant(states);
    const auto out = net.build_with(g, in, batch, leaves);
    return g.mse(g.gather_cols(out, index, dims), targets);
  };
  return gradcheck(build, net.params().tensors, h);
}

}  // namespace starris::nn
