#include <doctest.h>

#include "approx.hpp"
#include "chain_mdp.hpp"

#include "starris/agent/bandit.hpp"
#include "starris/agent/ddqn.hpp"

#include <set>

using namespace starris;

namespace {

Transition tagged(double r) { return {{r}, {0}, r, {r}, false}; }

nn::NetworkSpec linear_spec(int inputs, std::vector<int> heads) {
  nn::NetworkSpec s;
  s.trunk = nn::Trunk::Linear;
  s.n_tokens = 1;
  s.token_width = inputs;
  s.head_sizes = std::move(heads);
  return s;
}

// Linear network whose output for one-hot state k is row k of `table`.
nn::QNetwork table_network(const std::vector<std::vector<double>>& table, std::vector<int> heads) {
  const int n = static_cast<int>(table.size());
  nn::QNetwork net(linear_spec(n, std::move(heads)), 1);
  nn::Tensor& w = net.params().tensors[0];
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < w.cols(); ++j) w.at(s, j) = table[s][j];
  net.params().tensors[1].fill(0.0);
  return net;
}

std::vector<double> one_hot2(int s) { return {s == 0 ? 1.0 : 0.0, s == 1 ? 1.0 : 0.0}; }

}  // namespace

TEST_CASE("replay ring overwrites the oldest record") {
  ReplayBuffer buf(3);
  for (int k = 0; k < 5; ++k) buf.push(tagged(k));
  REQUIRE(buf.size() == 3);
  std::multiset<double> held;
  for (std::size_t k = 0; k < buf.size(); ++k) held.insert(buf.at(k).reward);
  CHECK(held == std::multiset<double>{2, 3, 4});
}

TEST_CASE("replay sampling is distinct, uniform and guarded") {
  ReplayBuffer buf(50);
  Rng rng(7);
  CHECK_THROWS_AS(buf.sample_indices(1, rng), BufferUnderflow);
  for (int k = 0; k < 10; ++k) buf.push(tagged(k));
  CHECK_THROWS_AS(buf.sample_indices(11, rng), BufferUnderflow);
  std::vector<int> hits(10, 0);
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    const auto idx = buf.sample_indices(4, rng);
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 4);
    for (auto i : idx) ++hits[i];
  }
  // Each index appears with probability 4/10 per draw.
  for (int h : hits) CHECK(std::abs(h / double(draws) - 0.4) < 0.02);
  CHECK(buf.sample_indices(10, rng).size() == 10);
}

TEST_CASE("epsilon schedule and tie-breaking") {
  CHECK(epsilon_schedule(0, 100, 1.0, 0.02, 0.3) == rel(1.0));
  CHECK(epsilon_schedule(15, 100, 1.0, 0.02, 0.3) == rel(0.51));
  CHECK(epsilon_schedule(30, 100, 1.0, 0.02, 0.3) == rel(0.02));
  CHECK(epsilon_schedule(99, 100, 1.0, 0.02, 0.3) == rel(0.02));
  const double v[] = {1.0, 3.0, 3.0, 2.0};
  CHECK(argmax_lowest(v, 4) == 1);
  const double flat[] = {0.0, 0.0, 0.0};
  CHECK(argmax_lowest(flat, 3) == 0);
}

TEST_CASE("double-DQN equals DQN when target and online coincide") {
  const auto net = table_network({{1.0, 2.0, 0.5, -1.0, 4.0}, {0.3, 0.1, 0.7, 0.2, 0.2}}, {3, 2});
  const nn::Tensor next({2, 2}, {1.0, 0.0, 0.0, 1.0});
  const auto dqn = td_targets(net, net, next, {1.0, 2.0}, {false, false}, 0.9, TargetRule::Dqn);
  const auto ddqn = td_targets(net, net, next, {1.0, 2.0}, {false, false}, 0.9, TargetRule::Ddqn);
  CHECK(dqn.values() == ddqn.values());
  CHECK(dqn.at(0, 0) == rel(1.0 + 0.9 * 2.0));
  CHECK(dqn.at(0, 1) == rel(1.0 + 0.9 * 4.0));
  CHECK(dqn.at(1, 0) == rel(2.0 + 0.9 * 0.7));
  CHECK(dqn.at(1, 1) == rel(2.0 + 0.9 * 0.2));
}

TEST_CASE("double-DQN evaluates the online argmax with the target network") {
  const auto online = table_network({{5.0, 1.0}}, {2});
  const auto target = table_network({{0.0, 10.0}}, {2});
  const nn::Tensor next({1, 1}, {1.0});
  CHECK(td_targets(online, target, next, {0.5}, {false}, 0.5, TargetRule::Ddqn).at(0, 0) == rel(0.5));
  CHECK(td_targets(online, target, next, {0.5}, {false}, 0.5, TargetRule::Dqn).at(0, 0) == rel(5.5));
  CHECK(td_targets(online, target, next, {0.5}, {true}, 0.5, TargetRule::Ddqn).at(0, 0) == rel(0.5));
}

TEST_CASE("epsilon-greedy extremes") {
  AgentConfig cfg;
  cfg.network = linear_spec(2, {3, 4});
  DqnAgent agent(cfg, 3);
  agent.online() = table_network({{0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 9.0}, {0, 0, 0, 0, 0, 0, 0}}, {3, 4});
  for (int k = 0; k < 50; ++k) CHECK(agent.select_action({1.0, 0.0}, 0.0) == std::vector<int>{1, 3});

  std::vector<std::vector<int>> hits{std::vector<int>(3), std::vector<int>(4)};
  const int draws = 24000;
  for (int k = 0; k < draws; ++k) {
    const auto a = agent.select_action({1.0, 0.0}, 1.0);
    ++hits[0][a[0]];
    ++hits[1][a[1]];
  }
  for (int d = 0; d < 2; ++d)
    for (int h : hits[d]) CHECK(std::abs(h / double(draws) - 1.0 / hits[d].size()) < 0.015);
}

TEST_CASE("train step fits a one-step tabular problem") {
  AgentConfig cfg;
  cfg.network = linear_spec(2, {2});
  cfg.discount = 0.5;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.2;
  DqnAgent agent(cfg, 11);
  // Terminal transitions: Q(s, a) must converge to the reward table.
  const double r[2][2] = {{1.0, -1.0}, {0.25, 0.75}};
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < 4; ++k) agent.observe({one_hot2(s), {a}, r[s][a], {0.0, 0.0}, true});
  CHECK_THROWS_AS(DqnAgent(cfg, 1).train_step(), BufferUnderflow);
  double loss = 0.0;
  for (int k = 0; k < 2000; ++k) loss = agent.train_step();
  CHECK(loss < 1e-8);
  for (int s = 0; s < 2; ++s) {
    const auto q = agent.q_values(one_hot2(s));
    CHECK(q[0] == doctest::Approx(r[s][0]).epsilon(1e-4));
    CHECK(q[1] == doctest::Approx(r[s][1]).epsilon(1e-4));
  }
}

TEST_CASE("target network syncs every period") {
  AgentConfig cfg;
  cfg.network = linear_spec(1, {2});
  cfg.batch_size = 1;
  cfg.target_sync_period = 3;
  cfg.learning_rate = 0.1;
  DqnAgent agent(cfg, 5);
  agent.observe({{1.0}, {0}, 1.0, {1.0}, false});
  const auto before = agent.target().params();
  agent.train_step();
  agent.train_step();
  CHECK(agent.target().params() == before);
  CHECK_FALSE(agent.online().params() == before);
  agent.train_step();
  CHECK(agent.target().params() == agent.online().params());
}

TEST_CASE("DDQN recovers the chain policy with a linear trunk") {
  const auto q_star = chain::optimal_q();
  CHECK(q_star[0][chain::kLeft] == rel(0.4));
  CHECK(q_star[0][chain::kRight] == rel(0.25));
  CHECK(q_star[3][chain::kRight] == rel(2.0));
  const DqnAgent agent = chain::train(nn::Trunk::Linear, TargetRule::Ddqn, 1);
  CHECK(chain::greedy_policy(agent) == std::vector<int>{0, 1, 1, 1});
  for (int s = 0; s < chain::kStates; ++s) {
    const auto q = agent.q_values(chain::one_hot(s));
    CHECK(std::abs(q[0] - q_star[s][0]) < 0.05);
    CHECK(std::abs(q[1] - q_star[s][1]) < 0.05);
  }
}

TEST_CASE("bandit pulls the best arm at rate 1 - eps + eps / k") {
  EpsilonGreedyBandit bandit({3, 2}, 9);
  CHECK_THROWS_AS(bandit.update({0}, 1.0), InvalidAction);
  bandit.update({2, 1}, 1.0);
  bandit.update({0, 0}, 0.5);
  CHECK(bandit.greedy() == std::vector<int>{2, 1});
  CHECK(bandit.mean(0, 2) == rel(1.0));
  bandit.update({2, 1}, 0.0);
  CHECK(bandit.mean(0, 2) == rel(0.5));
  CHECK(bandit.greedy() == std::vector<int>{0, 0});  // tie at 0.5 goes to the lower index

  EpsilonGreedyBandit fresh({4}, 2);
  fresh.update({2}, 1.0);
  const double eps = 0.2;
  int best = 0;
  const int draws = 40000;
  for (int k = 0; k < draws; ++k) best += fresh.select(eps)[0] == 2;
  CHECK(std::abs(best / double(draws) - (1.0 - eps + eps / 4.0)) < 0.01);
}
