// SPDX-License-Identifier: Apache-2.0
//
// Q-network with one output head per action dimension. Trunks:
//   Linear    - a single affine map (tabular checks with one-hot inputs)
//   Residual  - flat embedding, residual blocks, dense fusion
//   Attention - per-token embedding and residual blocks, multi-head
//               self-attention with skip, flatten, dense fusion

#pragma once

#include "starris/nn/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace starris::nn {

enum class Trunk { Linear, Residual, Attention };

std::string to_string(Trunk t);
Trunk trunk_from_string(const std::string& s);

struct NetworkSpec {
  Trunk trunk = Trunk::Attention;
  int n_tokens = 1;
  int token_width = 1;
  int embed_width = 16;
  int res_blocks = 1;
  int heads = 2;
  int fusion_width = 32;
  std::vector<int> head_sizes;

  int input_size() const { return n_tokens * token_width; }
  int output_size() const;
  // Throws ShapeMismatch on inconsistent sizes.
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

struct ParamSet {
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  std::size_t count() const;  // total scalar parameters
  ParamSet zeros_like() const;
  void fill(double v);
  bool operator==(const ParamSet&) const = default;
};

class QNetwork {
 public:
  QNetwork() = default;
  // Uniform fan-in initialization U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for
  // weights, zero biases, unit layer-norm gains.
  QNetwork(NetworkSpec spec, std::uint64_t seed);

  const NetworkSpec& spec() const { return spec_; }
  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

  // Records the forward pass of `input` ([batch, input_size]) on g and returns
  // the [batch, output_size] node. Parameter gradients flow into `grads` when
  // given; otherwise parameters enter as constants.
  Graph::Id build(Graph& g, Graph::Id input, int batch, ParamSet* grads = nullptr) const;
  // Same, with parameter k supplied as node param_ids[k].
  Graph::Id build_with(Graph& g, Graph::Id input, int batch, const std::vector<Graph::Id>& param_ids) const;

  // Inference on a [batch, input_size] tensor.
  Tensor forward(const Tensor& states) const;

 private:
  void add_param(const std::string& name, std::vector<int> shape, double bound, std::uint64_t& stream, double fill);

  NetworkSpec spec_;
  ParamSet params_;
  std::uint64_t seed_ = 0;
};

}  // namespace starris::nn
