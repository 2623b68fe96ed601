// SPDX-License-Identifier: Apache-2.0
//
// Deep Q-learning over a factored action space: one Q-head per action
// dimension, epsilon-greedy per dimension, DQN or double-DQN targets, hard
// target-network synchronization.

#pragma once

#include "starris/agent/replay.hpp"
#include "starris/nn/network.hpp"
#include "starris/nn/optim.hpp"

#include <cstdint>
#include <vector>

namespace starris {

enum class TargetRule { Dqn, Ddqn };

struct AgentConfig {
  nn::NetworkSpec network;
  TargetRule rule = TargetRule::Ddqn;
  double discount = 0.98;
  double learning_rate = 1e-3;
  int batch_size = 4;
  int target_sync_period = 100;
  int replay_capacity = 100000;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  double momentum = 0.9;
};

// Linear decay from `initial` to `final` over the first `fraction` of the
// episodes, constant afterwards.
double epsilon_schedule(int episode, int episodes, double initial, double final, double fraction);

// Index of the largest entry in [begin, begin + n); lowest index on ties.
int argmax_lowest(const double* values, int n);

// Per-sample, per-dimension bootstrap targets. `rewards` and `dones` have one
// entry per row of `next_states`; terminal rows take the reward alone.
nn::Tensor td_targets(const nn::QNetwork& online, const nn::QNetwork& target, const nn::Tensor& next_states,
                      const std::vector<double>& rewards, const std::vector<bool>& dones, double discount,
                      TargetRule rule);

class DqnAgent {
 public:
  DqnAgent(AgentConfig cfg, std::uint64_t seed);

  const AgentConfig& config() const { return cfg_; }
  const nn::QNetwork& online() const { return online_; }
  const nn::QNetwork& target() const { return target_; }
  nn::QNetwork& online() { return online_; }
  nn::QNetwork& target() { return target_; }
  ReplayBuffer& buffer() { return buffer_; }
  const ReplayBuffer& buffer() const { return buffer_; }

  // Q-values of all heads, concatenated.
  std::vector<double> q_values(const std::vector<double>& state) const;
  std::vector<int> greedy_action(const std::vector<double>& state) const;
  // With probability epsilon each dimension independently takes a uniform
  // option, otherwise its head's argmax.
  std::vector<int> select_action(const std::vector<double>& state, double epsilon);

  void observe(Transition t) { buffer_.push(std::move(t)); }
  // One minibatch update; returns the loss. Throws BufferUnderflow.
  double train_step();
  void sync_target() { target_.params() = online_.params(); }
  long train_steps() const { return train_steps_; }

  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

 private:
  AgentConfig cfg_;
  nn::QNetwork online_;
  nn::QNetwork target_;
  nn::Optimizer optimizer_;
  ReplayBuffer buffer_;
  Rng rng_;
  long train_steps_ = 0;
};

}  // namespace starris
