// SPDX-License-Identifier: Apache-2.0

#include "starris/agent/bandit.hpp"

#include "starris/agent/ddqn.hpp"

namespace starris {

EpsilonGreedyBandit::EpsilonGreedyBandit(std::vector<int> branch_sizes, std::uint64_t seed)
    : sizes_(std::move(branch_sizes)), rng_(derive_seed(seed, 0xba4d17)) {
  for (int s : sizes_) {
    if (s < 1) throw ConfigError("bandit dimensions need at least one arm");
    counts_.emplace_back(s, 0);
    means_.emplace_back(s, 0.0);
  }
}

std::vector<int> EpsilonGreedyBandit::greedy() const {
  std::vector<int> a;
  for (std::size_t d = 0; d < sizes_.size(); ++d) a.push_back(argmax_lowest(means_[d].data(), sizes_[d]));
  return a;
}

std::vector<int> EpsilonGreedyBandit::select(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  std::vector<int> a = greedy();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t d = 0; d < sizes_.size(); ++d)
    if (coin(rng_) < epsilon) a[d] = std::uniform_int_distribution<int>(0, sizes_[d] - 1)(rng_);
  return a;
}

void EpsilonGreedyBandit::update(const std::vector<int>& arms, double reward) {
  if (arms.size() != sizes_.size()) throw InvalidAction("bandit update with wrong number of dimensions");
  for (std::size_t d = 0; d < arms.size(); ++d) {
    const int a = arms[d];
    if (a < 0 || a >= sizes_[d]) throw InvalidAction("bandit arm out of range");
    const long n = ++counts_[d][a];
    means_[d][a] += (reward - means_[d][a]) / static_cast<double>(n);
  }
}

void EpsilonGreedyBandit::restore(std::vector<std::vector<long>> counts, std::vector<std::vector<double>> means) {
  auto fits = [&](const auto& table) {
    if (table.size() != sizes_.size()) return false;
    for (std::size_t d = 0; d < sizes_.size(); ++d)
      if (static_cast<int>(table[d].size()) != sizes_[d]) return false;
    return true;
  };
  if (!fits(counts) || !fits(means)) throw ShapeMismatch("bandit statistics do not match the branch sizes");
  counts_ = std::move(counts);
  means_ = std::move(means);
}

}  // namespace starris
