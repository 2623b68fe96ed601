// SPDX-License-Identifier: Apache-2.0

#include "starris/agent/ddqn.hpp"

#include <algorithm>

namespace starris {

double epsilon_schedule(int episode, int episodes, double initial, double final, double fraction) {
  const double horizon = fraction * episodes;
  if (horizon <= 0.0 || episode >= horizon) return final;
  return initial + (final - initial) * (episode / horizon);
}

int argmax_lowest(const double* values, int n) {
  int best = 0;
  for (int k = 1; k < n; ++k)
    if (values[k] > values[best]) best = k;
  return best;
}

nn::Tensor td_targets(const nn::QNetwork& online, const nn::QNetwork& target, const nn::Tensor& next_states,
                      const std::vector<double>& rewards, const std::vector<bool>& dones, double discount,
                      TargetRule rule) {
  const int batch = next_states.rows();
  if (static_cast<int>(rewards.size()) != batch || static_cast<int>(dones.size()) != batch)
    throw ShapeMismatch("td_targets: one reward and done flag per sample expected");
  const auto& heads = online.spec().head_sizes;
  const int dims = static_cast<int>(heads.size());
  const nn::Tensor q_target = target.forward(next_states);
  nn::Tensor q_online;
  if (rule == TargetRule::Ddqn) q_online = online.forward(next_states);

  nn::Tensor y({batch, dims});
  for (int b = 0; b < batch; ++b) {
    int offset = 0;
    for (int d = 0; d < dims; ++d) {
      double bootstrap = 0.0;
      if (!dones[b]) {
        const double* qt = q_target.data() + static_cast<std::size_t>(b) * q_target.cols() + offset;
        if (rule == TargetRule::Dqn) {
          bootstrap = *std::max_element(qt, qt + heads[d]);
        } else {
          const double* qo = q_online.data() + static_cast<std::size_t>(b) * q_online.cols() + offset;
          bootstrap = qt[argmax_lowest(qo, heads[d])];
        }
      }
      y.at(b, d) = rewards[b] + discount * bootstrap;
      offset += heads[d];
    }
  }
  return y;
}

DqnAgent::DqnAgent(AgentConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      online_(cfg_.network, derive_seed(seed, 0x0a11)),
      target_(online_),
      optimizer_(cfg_.optimizer, cfg_.learning_rate, cfg_.momentum),
      buffer_(static_cast<std::size_t>(cfg_.replay_capacity)),
      rng_(derive_seed(seed, 0xac7)) {
  if (!(cfg_.discount > 0.0 && cfg_.discount <= 1.0)) throw ConfigError("discount must lie in (0, 1]");
  if (cfg_.batch_size < 1 || cfg_.target_sync_period < 1) throw ConfigError("batch size and sync period must be >= 1");
}

std::vector<double> DqnAgent::q_values(const std::vector<double>& state) const {
  const int n = online_.spec().input_size();
  if (static_cast<int>(state.size()) != n) throw ShapeMismatch("state length does not match the network input");
  return online_.forward(nn::Tensor({1, n}, state)).values();
}

std::vector<int> DqnAgent::greedy_action(const std::vector<double>& state) const {
  const std::vector<double> q = q_values(state);
  std::vector<int> a;
  int offset = 0;
  for (int size : online_.spec().head_sizes) {
    a.push_back(argmax_lowest(q.data() + offset, size));
    offset += size;
  }
  return a;
}

std::vector<int> DqnAgent::select_action(const std::vector<double>& state, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  const auto& heads = online_.spec().head_sizes;
  std::vector<int> a(heads.size());
  std::vector<bool> explore(heads.size());
  bool any_greedy = false;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t d = 0; d < heads.size(); ++d) {
    explore[d] = coin(rng_) < epsilon;
    if (explore[d]) a[d] = std::uniform_int_distribution<int>(0, heads[d] - 1)(rng_);
    any_greedy = any_greedy || !explore[d];
  }
  if (any_greedy) {
    const std::vector<int> g = greedy_action(state);
    for (std::size_t d = 0; d < heads.size(); ++d)
      if (!explore[d]) a[d] = g[d];
  }
  return a;
}

double DqnAgent::train_step() {
  const auto idx = buffer_.sample_indices(static_cast<std::size_t>(cfg_.batch_size), rng_);
  const int batch = cfg_.batch_size;
  const int n = online_.spec().input_size();
  const auto& heads = online_.spec().head_sizes;
  const int dims = static_cast<int>(heads.size());

  nn::Tensor states({batch, n}), next({batch, n});
  std::vector<double> rewards(batch);
  std::vector<bool> dones(batch);
  std::vector<int> columns;
  columns.reserve(static_cast<std::size_t>(batch) * dims);
  for (int b = 0; b < batch; ++b) {
    const Transition& t = buffer_.at(idx[b]);
    if (static_cast<int>(t.state.size()) != n || static_cast<int>(t.next_state.size()) != n ||
        static_cast<int>(t.action.size()) != dims)
      throw ShapeMismatch("stored transition does not match the network");
    std::copy(t.state.begin(), t.state.end(), states.data() + static_cast<std::size_t>(b) * n);
    std::copy(t.next_state.begin(), t.next_state.end(), next.data() + static_cast<std::size_t>(b) * n);
    rewards[b] = t.reward;
    dones[b] = t.done;
    int offset = 0;
    for (int d = 0; d < dims; ++d) {
      columns.push_back(offset + t.action[d]);
      offset += heads[d];
    }
  }
  const nn::Tensor y = td_targets(online_, target_, next, rewards, dones, cfg_.discount, cfg_.rule);

  nn::Graph g;
  nn::ParamSet grads = online_.params().zeros_like();
  const auto q = online_.build(g, g.constant(std::move(states)), batch, &grads);
  const auto loss = g.mse(g.gather_cols(q, std::move(columns), dims), y);
  g.backward(loss);
  optimizer_.step(online_.params(), grads);

  ++train_steps_;
  if (train_steps_ % cfg_.target_sync_period == 0) sync_target();
  return g.value(loss)[0];
}

}  // namespace starris
