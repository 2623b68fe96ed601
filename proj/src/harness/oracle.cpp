// SPDX-License-Identifier: Apache-2.0

#include "starris/harness/oracle.hpp"

#include <unordered_map>

namespace starris {

namespace {

// Evaluates the staged configuration of `env` (beams solved here).
double score_staged(V2xEnv& env, const SolverOptions& opts) {
  const auto prob = make_problem(env.channels(), env.staged_channels(), env.allocation(), env.params());
  env.set_beamformers(sca_solve(prob, nullptr, opts).p);
  const LinkReport report = evaluate(env.channels(), env.staged_channels(), env.allocation(), env.params());
  return reward(report, env.params());
}

// Byte key of everything the one-step reward depends on.
std::string config_key(const V2xEnv& env) {
  const AllocationState& a = env.allocation();
  std::string key;
  auto put = [&key](const void* p, std::size_t n) { key.append(static_cast<const char*>(p), n); };
  for (int c : a.spectrum.choices()) put(&c, sizeof c);
  for (double p : a.p_v2v) put(&p, sizeof p);
  const StarRisConfig& s = a.ris;
  put(s.beta_r.data(), s.beta_r.size() * sizeof(double));
  put(s.kappa_r.data(), s.kappa_r.size() * sizeof(int));
  put(s.kappa_t.data(), s.kappa_t.size() * sizeof(int));
  return key;
}

}  // namespace

double one_step_value(const V2xEnv& env, const ActionTuple& action, const SolverOptions& opts,
                      const StepOverrides& overrides) {
  V2xEnv copy = env;
  copy.apply_action(action, overrides);
  return score_staged(copy, opts);
}

OracleResult brute_force_oracle(const V2xEnv& env, const SolverOptions& opts, double limit) {
  const ActionCatalog& cat = env.catalog();
  if (cat.joint_cardinality() > limit)
    throw SpaceTooLarge("joint catalog has " + std::to_string(cat.joint_cardinality()) + " entries, limit " +
                        std::to_string(limit));
  OracleResult best;
  std::unordered_map<std::string, double> cache;
  std::vector<int> flat(cat.n_dims(), 0);
  bool first = true;
  while (true) {
    V2xEnv copy = env;
    copy.apply_action(unflatten(flat, cat));
    const std::string key = config_key(copy);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, score_staged(copy, opts)).first;
      ++best.solves;
    }
    const double v = it->second;
    ++best.evaluated;
    const double tol = 1e-12 * std::max(1.0, std::abs(best.value));
    if (first || v > best.value + tol) {
      best.value = v;
      best.action = flat;
      best.ties = {flat};
      first = false;
    } else if (std::abs(v - best.value) <= tol) {
      best.ties.push_back(flat);
    }
    int d = cat.n_dims() - 1;
    while (d >= 0 && ++flat[d] == cat.branch_sizes[d]) flat[d--] = 0;
    if (d < 0) break;
  }
  return best;
}

OracleGap greedy_vs_oracle(Runner& runner, int draws, double limit) {
  if (draws < 1) throw ConfigError("greedy_vs_oracle needs at least one draw");
  const SolverOptions opts = solver_options(runner.manifest().params);
  OracleGap gap;
  for (int k = 0; k < draws; ++k) {
    const auto state = runner.env().reset(Runner::heldout_episode_seed(runner.seed(), k));
    const ActionTuple action = runner.greedy_action(state);
    gap.policy.push_back(one_step_value(runner.env(), action, opts));
    gap.oracle.push_back(brute_force_oracle(runner.env(), opts, limit).value);
  }
  for (int k = 0; k < draws; ++k) {
    gap.policy_mean += gap.policy[k] / draws;
    gap.oracle_mean += gap.oracle[k] / draws;
  }
  return gap;
}

}  // namespace starris
