// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive one-step search over the joint action catalog on a frozen state.

#pragma once

#include "starris/beamformer.hpp"
#include "starris/env.hpp"
#include "starris/harness/runner.hpp"

#include <vector>

namespace starris {

// Reward of staging `action` on a copy of env, with beams from the SCA solver.
double one_step_value(const V2xEnv& env, const ActionTuple& action, const SolverOptions& opts,
                      const StepOverrides& overrides = {});

struct OracleResult {
  std::vector<int> action;  // flattened maximizer, lowest joint index on ties
  double value = 0.0;
  std::vector<std::vector<int>> ties;  // every maximizer within 1e-12 relative
  long evaluated = 0;  // catalog entries visited
  long solves = 0;     // distinct configurations scored
};

// Joint index order: the first dimension is most significant. Throws
// SpaceTooLarge when the catalog has more than `limit` entries.
OracleResult brute_force_oracle(const V2xEnv& env, const SolverOptions& opts, double limit = 1e6);

struct OracleGap {
  std::vector<double> policy;  // one-step reward of the greedy action per draw
  std::vector<double> oracle;  // best one-step reward per draw
  double policy_mean = 0.0;
  double oracle_mean = 0.0;
  // policy_mean / oracle_mean; only meaningful when oracle_mean > 0.
  double ratio() const { return policy_mean / oracle_mean; }
};

// Resets the runner's environment on `draws` held-out episode seeds and scores
// the greedy first action against the exhaustive optimum of the same state.
OracleGap greedy_vs_oracle(Runner& runner, int draws, double limit = 1e6);

}  // namespace starris
