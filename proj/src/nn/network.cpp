// SPDX-License-Identifier: Apache-2.0

#include "starris/nn/network.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace starris::nn {

std::string to_string(Trunk t) {
  switch (t) {
    case Trunk::Linear: return "linear";
    case Trunk::Residual: return "residual";
    case Trunk::Attention: return "attention";
  }
  return "?";
}

Trunk trunk_from_string(const std::string& s) {
  if (s == "linear") return Trunk::Linear;
  if (s == "residual") return Trunk::Residual;
  if (s == "attention") return Trunk::Attention;
  throw ConfigError("unknown network trunk '" + s + "'");
}

int NetworkSpec::output_size() const { return std::accumulate(head_sizes.begin(), head_sizes.end(), 0); }

void NetworkSpec::validate() const {
  if (n_tokens < 1 || token_width < 1) throw ShapeMismatch("network input must be non-empty");
  if (head_sizes.empty()) throw ShapeMismatch("network needs at least one output head");
  for (int h : head_sizes)
    if (h < 1) throw ShapeMismatch("output heads must have at least one action");
  if (trunk == Trunk::Linear) return;
  if (embed_width < 1 || fusion_width < 1 || res_blocks < 0) throw ShapeMismatch("bad hidden widths");
  if (trunk == Trunk::Attention && (heads < 1 || embed_width % heads != 0))
    throw ShapeMismatch("embed width " + std::to_string(embed_width) + " not divisible by " + std::to_string(heads) +
                        " heads");
}

std::size_t ParamSet::count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

ParamSet ParamSet::zeros_like() const {
  ParamSet z;
  z.names = names;
  for (const auto& t : tensors) z.tensors.emplace_back(t.shape());
  return z;
}

void ParamSet::fill(double v) {
  for (auto& t : tensors) t.fill(v);
}

void QNetwork::add_param(const std::string& name, std::vector<int> shape, double bound, std::uint64_t& stream,
                         double fill) {
  Tensor t = Tensor::filled(std::move(shape), fill);
  if (bound > 0.0) {
    Rng rng(derive_seed(seed_, stream));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double& v : t.values()) v = u(rng);
  }
  ++stream;
  params_.names.push_back(name);
  params_.tensors.push_back(std::move(t));
}

QNetwork::QNetwork(NetworkSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {
  spec_.validate();
  std::uint64_t stream = 0;
  auto dense = [&](const std::string& name, int in, int out) {
    add_param(name + ".w", {in, out}, 1.0 / std::sqrt(static_cast<double>(in)), stream, 0.0);
    add_param(name + ".b", {out}, 0.0, stream, 0.0);
  };
  auto block = [&](const std::string& name, int width) {
    dense(name + ".fc1", width, width);
    add_param(name + ".ln.gain", {width}, 0.0, stream, 1.0);
    add_param(name + ".ln.shift", {width}, 0.0, stream, 0.0);
    dense(name + ".fc2", width, width);
  };
  const int out = spec_.output_size();
  const int e = spec_.embed_width;
  switch (spec_.trunk) {
    case Trunk::Linear:
      dense("head", spec_.input_size(), out);
      break;
    case Trunk::Residual:
      dense("embed", spec_.input_size(), e);
      for (int k = 0; k < spec_.res_blocks; ++k) block("res" + std::to_string(k), e);
      dense("fusion", e, spec_.fusion_width);
      dense("head", spec_.fusion_width, out);
      break;
    case Trunk::Attention:
      dense("embed", spec_.token_width, e);
      for (int k = 0; k < spec_.res_blocks; ++k) block("res" + std::to_string(k), e);
      dense("mha.query", e, e);
      dense("mha.key", e, e);
      dense("mha.value", e, e);
      dense("mha.out", e, e);
      dense("fusion", spec_.n_tokens * e, spec_.fusion_width);
      dense("head", spec_.fusion_width, out);
      break;
  }
}

Graph::Id QNetwork::build(Graph& g, Graph::Id input, int batch, ParamSet* grads) const {
  if (grads && grads->tensors.size() != params_.tensors.size()) throw ShapeMismatch("gradient set does not match");
  std::vector<Graph::Id> ids;
  ids.reserve(params_.tensors.size());
  for (std::size_t k = 0; k < params_.tensors.size(); ++k)
    ids.push_back(grads ? g.leaf(params_.tensors[k], &grads->tensors[k]) : g.constant(params_.tensors[k]));
  return build_with(g, input, batch, ids);
}

Graph::Id QNetwork::build_with(Graph& g, Graph::Id input, int batch, const std::vector<Graph::Id>& param_ids) const {
  if (param_ids.size() != params_.tensors.size()) throw ShapeMismatch("parameter node count does not match");
  const Tensor& x = g.value(input);
  if (x.rows() != batch || x.cols() != spec_.input_size())
    throw ShapeMismatch("network input " + shape_string(x.shape()) + ", expected [" + std::to_string(batch) + "," +
                        std::to_string(spec_.input_size()) + "]");
  std::size_t cursor = 0;
  auto next = [&]() { return param_ids[cursor++]; };
  auto dense = [&](Graph::Id h) {
    const auto w = next();
    const auto b = next();
    return g.add_bias(g.matmul(h, w), b);
  };
  auto block = [&](Graph::Id h) {
    auto y = dense(h);
    const auto gain = next();
    const auto shift = next();
    y = g.swish(g.layer_norm(y, gain, shift));
    y = dense(y);
    return g.add(h, y);
  };

  const int e = spec_.embed_width;
  Graph::Id h = input;
  switch (spec_.trunk) {
    case Trunk::Linear:
      return dense(h);
    case Trunk::Residual:
      h = g.swish(dense(h));
      for (int k = 0; k < spec_.res_blocks; ++k) h = block(h);
      h = g.swish(dense(h));
      return dense(h);
    case Trunk::Attention: {
      const int t = spec_.n_tokens;
      h = g.reshape(h, {batch * t, spec_.token_width});
      h = g.swish(dense(h));
      for (int k = 0; k < spec_.res_blocks; ++k) h = block(h);
      const auto q = dense(h);
      const auto kk = dense(h);
      const auto v = dense(h);
      const auto att = g.attention(q, kk, v, batch, t, spec_.heads);
      h = g.add(h, dense(att));
      h = g.reshape(h, {batch, t * e});
      h = g.swish(dense(h));
      return dense(h);
    }
  }
  throw Error("unreachable trunk");
}

Tensor QNetwork::forward(const Tensor& states) const {
  Graph g;
  const int batch = states.rows();
  const auto in = g.constant(states.reshaped({batch, spec_.input_size()}));
  const auto out = build(g, in, batch);
  return g.value(out);
}

}  // namespace starris::nn
