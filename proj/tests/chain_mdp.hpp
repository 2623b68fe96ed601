// Four-state chain with a small nearby reward and a large distant one. With
// discount 0.5 the optimal policy is left in state 0, right elsewhere.
#pragma once

#include "starris/agent/ddqn.hpp"

#include <array>
#include <vector>

namespace chain {

inline constexpr int kStates = 4;
inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;
inline constexpr double kDiscount = 0.5;

struct Outcome {
  int next;
  double reward;
};

inline Outcome step(int s, int a) {
  if (a == kLeft) return s == 0 ? Outcome{0, 0.2} : Outcome{s - 1, 0.0};
  return s == kStates - 1 ? Outcome{s, 1.0} : Outcome{s + 1, 0.0};
}

inline std::vector<double> one_hot(int s) {
  std::vector<double> x(kStates, 0.0);
  x[s] = 1.0;
  return x;
}

// Exact Q* by value iteration.
inline std::array<std::array<double, 2>, kStates> optimal_q() {
  std::array<std::array<double, 2>, kStates> q{};
  for (int it = 0; it < 2000; ++it) {
    auto next = q;
    for (int s = 0; s < kStates; ++s)
      for (int a = 0; a < 2; ++a) {
        const Outcome o = step(s, a);
        next[s][a] = o.reward + kDiscount * std::max(q[o.next][0], q[o.next][1]);
      }
    q = next;
  }
  return q;
}

inline starris::AgentConfig config(starris::nn::Trunk trunk, starris::TargetRule rule) {
  starris::AgentConfig cfg;
  cfg.network.trunk = trunk;
  cfg.network.n_tokens = 1;
  cfg.network.token_width = kStates;
  cfg.network.embed_width = 8;
  cfg.network.heads = 2;
  cfg.network.fusion_width = 16;
  cfg.network.head_sizes = {2};
  cfg.rule = rule;
  cfg.discount = kDiscount;
  cfg.batch_size = 16;
  cfg.target_sync_period = 25;
  if (trunk == starris::nn::Trunk::Linear) {
    cfg.optimizer = starris::OptimizerKind::Sgd;
    cfg.learning_rate = 0.2;
  } else {
    cfg.optimizer = starris::OptimizerKind::Adam;
    cfg.learning_rate = 0.003;
  }
  cfg.replay_capacity = 5000;
  return cfg;
}

// Trains from uniformly random starts with a decaying epsilon and returns the
// trained agent. The chain never terminates; episodes are truncated, so the
// bootstrap is kept on the last transition.
inline starris::DqnAgent train(starris::nn::Trunk trunk, starris::TargetRule rule, std::uint64_t seed,
                               int episodes = 300, int horizon = 10) {
  starris::DqnAgent agent(config(trunk, rule), seed);
  starris::Rng rng(seed);
  for (int ep = 0; ep < episodes; ++ep) {
    const double eps = starris::epsilon_schedule(ep, episodes, 1.0, 0.1, 0.5);
    int s = std::uniform_int_distribution<int>(0, kStates - 1)(rng);
    for (int k = 0; k < horizon; ++k) {
      const int a = agent.select_action(one_hot(s), eps)[0];
      const Outcome o = step(s, a);
      agent.observe({one_hot(s), {a}, o.reward, one_hot(o.next), false});
      if (static_cast<int>(agent.buffer().size()) >= agent.config().batch_size) agent.train_step();
      s = o.next;
    }
  }
  return agent;
}

inline std::vector<int> greedy_policy(const starris::DqnAgent& agent) {
  std::vector<int> pi;
  for (int s = 0; s < kStates; ++s) pi.push_back(agent.greedy_action(one_hot(s))[0]);
  return pi;
}

}  // namespace chain
