// SPDX-License-Identifier: Apache-2.0

#include "starris/nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace starris::nn {

namespace {

void same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw ShapeMismatch(std::string(op) + ": shapes " + shape_string(a.shape()) + " and " +
                        shape_string(b.shape()) + " differ");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void Graph::check_id(Id id) const {
  if (id < 0 || id >= static_cast<Id>(nodes_.size())) throw IndexOutOfRange("graph node " + std::to_string(id));
}

Graph::Id Graph::push(Tensor value, bool needs_grad, std::function<void(Graph&, Id)> back) {
  require_finite(value, "forward pass");
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size()) - 1;
}

Tensor& Graph::grad_buffer(Id id) {
  Node& n = nodes_[id];
  if (!n.has_grad) {
    n.grad = Tensor(n.value.shape());
    n.has_grad = true;
  }
  return n.grad;
}

const Tensor& Graph::grad(Id id) const {
  check_id(id);
  const Node& n = nodes_[id];
  if (!n.has_grad) throw Error("no gradient recorded for node " + std::to_string(id));
  return n.grad;
}

Graph::Id Graph::constant(Tensor value) { return push(std::move(value), false, nullptr); }

Graph::Id Graph::leaf(const Tensor& value, Tensor* sink) {
  const Id id = push(value, true, [](Graph&, Id) {});
  nodes_[id].sink = sink;
  return id;
}

Graph::Id Graph::matmul(Id a, Id b) {
  check_id(a);
  check_id(b);
  const Tensor& va = value(a);
  const Tensor& vb = value(b);
  if (va.cols() != vb.rows())
    throw ShapeMismatch("matmul: " + shape_string(va.shape()) + " x " + shape_string(vb.shape()));
  Tensor out({va.rows(), vb.cols()});
  out.mat().noalias() = va.mat() * vb.mat();
  return push(std::move(out), needs(a) || needs(b), [a, b](Graph& g, Id self) {
    const Tensor& d = g.nodes_[self].grad;
    if (g.needs(a)) g.grad_buffer(a).mat().noalias() += d.mat() * g.value(b).mat().transpose();
    if (g.needs(b)) g.grad_buffer(b).mat().noalias() += g.value(a).mat().transpose() * d.mat();
  });
}

Graph::Id Graph::add_bias(Id x, Id bias) {
  check_id(x);
  check_id(bias);
  const Tensor& vx = value(x);
  const Tensor& vb = value(bias);
  if (static_cast<int>(vb.size()) != vx.cols())
    throw ShapeMismatch("add_bias: bias of size " + std::to_string(vb.size()) + " for " + shape_string(vx.shape()));
  Tensor out = vx;
  out.mat().rowwise() += ConstMatMap(vb.data(), 1, vx.cols()).row(0);
  return push(std::move(out), needs(x) || needs(bias), [x, bias](Graph& g, Id self) {
    const Tensor& d = g.nodes_[self].grad;
    if (g.needs(x)) g.grad_buffer(x).mat() += d.mat();
    if (g.needs(bias)) {
      Tensor& gb = g.grad_buffer(bias);
      MatMap(gb.data(), 1, d.cols()) += d.mat().colwise().sum();
    }
  });
}

Graph::Id Graph::add(Id a, Id b) {
  check_id(a);
  check_id(b);
  same_shape(value(a), value(b), "add");
  Tensor out = value(a);
  out.mat() += value(b).mat();
  return push(std::move(out), needs(a) || needs(b), [a, b](Graph& g, Id self) {
    const Tensor& d = g.nodes_[self].grad;
    if (g.needs(a)) g.grad_buffer(a).mat() += d.mat();
    if (g.needs(b)) g.grad_buffer(b).mat() += d.mat();
  });
}

Graph::Id Graph::sub(Id a, Id b) {
  check_id(a);
  check_id(b);
  same_shape(value(a), value(b), "sub");
  Tensor out = value(a);
  out.mat() -= value(b).mat();
  return push(std::move(out), needs(a) || needs(b), [a, b](Graph& g, Id self) {
    const Tensor& d = g.nodes_[self].grad;
    if (g.needs(a)) g.grad_buffer(a).mat() += d.mat();
    if (g.needs(b)) g.grad_buffer(b).mat() -= d.mat();
  });
}

Graph::Id Graph::mul(Id a, Id b) {
  check_id(a);
  check_id(b);
  same_shape(value(a), value(b), "mul");
  Tensor out = value(a);
  out.mat().array() *= value(b).mat().array();
  return push(std::move(out), needs(a) || needs(b), [a, b](Graph& g, Id self) {
    const Tensor& d = g.nodes_[self].grad;
    if (g.needs(a)) g.grad_buffer(a).mat().array() += d.mat().array() * g.value(b).mat().array();
    if (g.needs(b)) g.grad_buffer(b).mat().array() += d.mat().array() * g.value(a).mat().array();
  });
}

Graph::Id Graph::scale(Id a, double s) {
  check_id(a);
  Tensor out = value(a);
  out.mat() *= s;
  return push(std::move(out), needs(a), [a, s](Graph& g, Id self) {
    g.grad_buffer(a).mat() += s * g.nodes_[self].grad.mat();
  });
}

Graph::Id Graph::swish(Id x) {
  check_id(x);
  Tensor out = value(x);
  for (double& v : out.values()) v = v * sigmoid(v);
  return push(std::move(out), needs(x), [x](Graph& g, Id self) {
    const Tensor& d = g.nodes_[self].grad;
    const Tensor& in = g.value(x);
    Tensor& gx = g.grad_buffer(x);
    for (std::size_t k = 0; k < in.size(); ++k) {
      const double s = sigmoid(in[k]);
      gx[k] += d[k] * (s + in[k] * s * (1.0 - s));
    }
  });
}

Graph::Id Graph::layer_norm(Id x, Id gamma, Id beta, double eps) {
  check_id(x);
  check_id(gamma);
  check_id(beta);
  const Tensor& vx = value(x);
  const int rows = vx.rows(), cols = vx.cols();
  if (static_cast<int>(value(gamma).size()) != cols || static_cast<int>(value(beta).size()) != cols)
    throw ShapeMismatch("layer_norm: gain/shift size must equal the last dimension");
  // Normalized activations and inverse std are kept for the backward pass.
  auto xhat = std::make_shared<Tensor>(vx.shape());
  auto inv_std = std::make_shared<std::vector<double>>(rows);
  Tensor out(vx.shape());
  const Tensor& vg = value(gamma);
  const Tensor& vbeta = value(beta);
  for (int r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (int c = 0; c < cols; ++c) mean += vx.at(r, c);
    mean /= cols;
    double var = 0.0;
    for (int c = 0; c < cols; ++c) var += (vx.at(r, c) - mean) * (vx.at(r, c) - mean);
    var /= cols;
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (int c = 0; c < cols; ++c) {
      const double h = (vx.at(r, c) - mean) * is;
      xhat->at(r, c) = h;
      out.at(r, c) = h * vg[c] + vbeta[c];
    }
  }
  return push(std::move(out), needs(x) || needs(gamma) || needs(beta),
              [x, gamma, beta, xhat, inv_std, rows, cols](Graph& g, Id self) {
                const Tensor& d = g.nodes_[self].grad;
                const Tensor& vg = g.value(gamma);
                if (g.needs(gamma)) {
                  Tensor& gg = g.grad_buffer(gamma);
                  for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) gg[c] += d.at(r, c) * xhat->at(r, c);
                }
                if (g.needs(beta)) {
                  Tensor& gb = g.grad_buffer(beta);
                  for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) gb[c] += d.at(r, c);
                }
                if (g.needs(x)) {
                  Tensor& gx = g.grad_buffer(x);
                  for (int r = 0; r < rows; ++r) {
                    double sum_dh = 0.0, sum_dh_h = 0.0;
                    for (int c = 0; c < cols; ++c) {
                      const double dh = d.at(r, c) * vg[c];
                      sum_dh += dh;
                      sum_dh_h += dh * xhat->at(r, c);
                    }
                    for (int c = 0; c < cols; ++c) {
                      const double dh = d.at(r, c) * vg[c];
                      gx.at(r, c) += (*inv_std)[r] / cols * (cols * dh - sum_dh - xhat->at(r, c) * sum_dh_h);
                    }
                  }
                }
              });
}

Graph::Id Graph::attention(Id q, Id k, Id v, int batch, int tokens, int heads) {
  check_id(q);
  check_id(k);
  check_id(v);
  const Tensor& vq = value(q);
  const Tensor& vk = value(k);
  const Tensor& vv = value(v);
  const int width = vq.cols();
  if (batch < 1 || tokens < 1 || heads < 1 || vq.rows() != batch * tokens || vk.rows() != batch * tokens ||
      vv.rows() != batch * tokens || vk.cols() != width || vv.cols() != width || width % heads != 0)
    throw ShapeMismatch("attention: expected q, k, v of shape [" + std::to_string(batch * tokens) + ", d] with d % " +
                        std::to_string(heads) + " == 0");
  const int dk = width / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dk));
  // Softmax weights per (batch, head), each tokens x tokens.
  auto weights = std::make_shared<std::vector<RowMatrix>>(static_cast<std::size_t>(batch) * heads);
  Tensor out({batch * tokens, width});
  for (int b = 0; b < batch; ++b) {
    for (int h = 0; h < heads; ++h) {
      const auto qb = vq.mat().block(b * tokens, h * dk, tokens, dk);
      const auto kb = vk.mat().block(b * tokens, h * dk, tokens, dk);
      const auto vb = vv.mat().block(b * tokens, h * dk, tokens, dk);
      RowMatrix s = (qb * kb.transpose()) * inv_sqrt;
      for (int r = 0; r < tokens; ++r) {
        const double m = s.row(r).maxCoeff();
        s.row(r) = (s.row(r).array() - m).exp();
        s.row(r) /= s.row(r).sum();
      }
      out.mat().block(b * tokens, h * dk, tokens, dk).noalias() = s * vb;
      (*weights)[static_cast<std::size_t>(b) * heads + h] = std::move(s);
    }
  }
  return push(std::move(out), needs(q) || needs(k) || needs(v),
              [q, k, v, batch, tokens, heads, dk, inv_sqrt, weights](Graph& g, Id self) {
                const Tensor& d = g.nodes_[self].grad;
                for (int b = 0; b < batch; ++b) {
                  for (int h = 0; h < heads; ++h) {
                    const RowMatrix& a = (*weights)[static_cast<std::size_t>(b) * heads + h];
                    const auto db = d.mat().block(b * tokens, h * dk, tokens, dk);
                    const auto qb = g.value(q).mat().block(b * tokens, h * dk, tokens, dk);
                    const auto kb = g.value(k).mat().block(b * tokens, h * dk, tokens, dk);
                    const auto vb = g.value(v).mat().block(b * tokens, h * dk, tokens, dk);
                    if (g.needs(v)) g.grad_buffer(v).mat().block(b * tokens, h * dk, tokens, dk).noalias() +=
                        a.transpose() * db;
                    if (!g.needs(q) && !g.needs(k)) continue;
                    const RowMatrix da = db * vb.transpose();
                    RowMatrix ds = a;
                    for (int r = 0; r < tokens; ++r) {
                      const double dot = (da.row(r).array() * a.row(r).array()).sum();
                      ds.row(r).array() = a.row(r).array() * (da.row(r).array() - dot);
                    }
                    ds *= inv_sqrt;
                    if (g.needs(q))
                      g.grad_buffer(q).mat().block(b * tokens, h * dk, tokens, dk).noalias() += ds * kb;
                    if (g.needs(k))
                      g.grad_buffer(k).mat().block(b * tokens, h * dk, tokens, dk).noalias() += ds.transpose() * qb;
                  }
                }
              });
}

Graph::Id Graph::reshape(Id x, std::vector<int> shape) {
  check_id(x);
  Tensor out = value(x).reshaped(std::move(shape));
  return push(std::move(out), needs(x), [x](Graph& g, Id self) {
    Tensor& gx = g.grad_buffer(x);
    const Tensor& d = g.nodes_[self].grad;
    for (std::size_t k = 0; k < d.size(); ++k) gx[k] += d[k];
  });
}

Graph::Id Graph::gather_cols(Id x, std::vector<int> index, int per_row) {
  check_id(x);
  const Tensor& vx = value(x);
  const int rows = vx.rows(), cols = vx.cols();
  if (per_row < 1 || static_cast<int>(index.size()) != rows * per_row)
    throw ShapeMismatch("gather_cols: index count does not match rows * per_row");
  for (int c : index)
    if (c < 0 || c >= cols) throw IndexOutOfRange("gather_cols: column " + std::to_string(c));
  Tensor out({rows, per_row});
  for (int r = 0; r < rows; ++r)
    for (int j = 0; j < per_row; ++j) out.at(r, j) = vx.at(r, index[r * per_row + j]);
  return push(std::move(out), needs(x), [x, index = std::move(index), per_row, rows](Graph& g, Id self) {
    Tensor& gx = g.grad_buffer(x);
    const Tensor& d = g.nodes_[self].grad;
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < per_row; ++j) gx.at(r, index[r * per_row + j]) += d.at(r, j);
  });
}

Graph::Id Graph::mse(Id pred, const Tensor& target) {
  check_id(pred);
  const Tensor& vp = value(pred);
  if (vp.size() != target.size() || vp.size() == 0)
    throw ShapeMismatch("mse: prediction " + shape_string(vp.shape()) + " vs target " + shape_string(target.shape()));
  require_finite(target, "mse target");
  auto diff = std::make_shared<std::vector<double>>(vp.size());
  double loss = 0.0;
  for (std::size_t k = 0; k < vp.size(); ++k) {
    (*diff)[k] = vp[k] - target[k];
    loss += (*diff)[k] * (*diff)[k];
  }
  const double n = static_cast<double>(vp.size());
  return push(Tensor({1}, {loss / n}), needs(pred), [pred, diff, n](Graph& g, Id self) {
    const double d = g.nodes_[self].grad[0];
    Tensor& gp = g.grad_buffer(pred);
    for (std::size_t k = 0; k < diff->size(); ++k) gp[k] += d * 2.0 * (*diff)[k] / n;
  });
}

void Graph::backward(Id root) {
  check_id(root);
  if (value(root).size() != 1) throw ShapeMismatch("backward root must hold a single value");
  for (auto& n : nodes_) {
    n.has_grad = false;
  }
  if (!nodes_[root].needs_grad) return;
  grad_buffer(root)[0] = 1.0;
  for (Id id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || !n.has_grad) continue;
    require_finite(n.grad, "backward pass");
    n.back(*this, id);
    if (n.sink) {
      if (n.sink->size() != n.grad.size()) throw ShapeMismatch("gradient sink has wrong size");
      for (std::size_t k = 0; k < n.grad.size(); ++k) (*n.sink)[k] += n.grad[k];
    }
  }
}

}  // namespace starris::nn
