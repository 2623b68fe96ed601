// SPDX-License-Identifier: Apache-2.0
//
// Epsilon-greedy multi-armed bandit baseline: one independent bandit per
// action dimension, all updated with the shared reward.

#pragma once

#include "starris/common.hpp"

#include <cstdint>
#include <vector>

namespace starris {

class EpsilonGreedyBandit {
 public:
  EpsilonGreedyBandit(std::vector<int> branch_sizes, std::uint64_t seed);

  // Per dimension: uniform arm with probability epsilon, otherwise the arm
  // with the highest mean (lowest index on ties; unpulled arms have mean 0).
  std::vector<int> select(double epsilon);
  std::vector<int> greedy() const;
  // Incremental mean update of every chosen arm.
  void update(const std::vector<int>& arms, double reward);

  long count(int dim, int arm) const { return counts_.at(dim).at(arm); }
  double mean(int dim, int arm) const { return means_.at(dim).at(arm); }
  const std::vector<int>& branch_sizes() const { return sizes_; }
  // Replaces the arm statistics; shapes must match the branch sizes.
  void restore(std::vector<std::vector<long>> counts, std::vector<std::vector<double>> means);

 private:
  std::vector<int> sizes_;
  std::vector<std::vector<long>> counts_;
  std::vector<std::vector<double>> means_;
  Rng rng_;
};

}  // namespace starris
