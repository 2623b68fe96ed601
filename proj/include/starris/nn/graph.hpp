// SPDX-License-Identifier: Apache-2.0
//
// Reverse-mode tape. Every op appends a node holding its value and a closure
// that pushes the node's gradient to its inputs; backward() walks the tape in
// reverse. Matrices are the last two "views" of a tensor: rows() x cols().

#pragma once

#include "starris/nn/tensor.hpp"

#include <functional>
#include <vector>

namespace starris::nn {

class Graph {
 public:
  using Id = int;

  // Value without gradient.
  Id constant(Tensor value);
  // Differentiable input; after backward() its gradient is added into *sink
  // when sink is non-null and is always available through grad(id).
  Id leaf(const Tensor& value, Tensor* sink = nullptr);

  Id matmul(Id a, Id b);
  Id add_bias(Id x, Id bias);  // x [m,n] + bias[n] broadcast over rows
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);  // elementwise
  Id scale(Id a, double s);
  Id swish(Id x);
  Id layer_norm(Id x, Id gamma, Id beta, double eps = 1e-5);  // over the last dimension
  // Scaled dot-product attention, run independently for every (batch, head):
  // q, k, v are [batch*tokens, width] with width split into `heads` blocks.
  Id attention(Id q, Id k, Id v, int batch, int tokens, int heads);
  Id reshape(Id x, std::vector<int> shape);
  // out[r, j] = x[r, index[r*per_row + j]]
  Id gather_cols(Id x, std::vector<int> index, int per_row);
  // mean((pred - target)^2) as a scalar; target carries no gradient.
  Id mse(Id pred, const Tensor& target);

  const Tensor& value(Id id) const { return nodes_.at(id).value; }
  // Gradient of the last backward() root with respect to node `id`.
  const Tensor& grad(Id id) const;
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(root)/d(root) = 1 for a single-element root.
  void backward(Id root);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool needs_grad = false;
    bool has_grad = false;
    Tensor* sink = nullptr;
    std::function<void(Graph&, Id)> back;
  };

  Id push(Tensor value, bool needs_grad, std::function<void(Graph&, Id)> back);
  Tensor& grad_buffer(Id id);
  bool needs(Id id) const { return nodes_[id].needs_grad; }
  void check_id(Id id) const;

  std::vector<Node> nodes_;
};

}  // namespace starris::nn
