// SPDX-License-Identifier: Apache-2.0
//
// Alternating training loop: the agent picks spectrum, V2V power and surface
// increments, the beamformer re-solves the V2I beams for the staged
// configuration, the environment scores the step.

#pragma once

#include "starris/agent/bandit.hpp"
#include "starris/agent/ddqn.hpp"
#include "starris/beamformer.hpp"
#include "starris/env.hpp"
#include "starris/harness/manifest.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace starris {

struct EpisodeRecord {
  int episode = 0;
  Scheme scheme = Scheme::StarProposed;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;   // V2I sum rate averaged over the episode's steps, bit/s
  double p_latency = 0.0;  // fraction of pair-steps meeting the latency rate
  double p_outage = 0.0;   // fraction of pair-steps meeting the outage constraint
  double reward = 0.0;     // episode return
  int steps = 0;
  int infeasible = 0;  // solves that fell back to restoration beams
  std::vector<double> step_sum_rates;
};

struct RunCounters {
  long beamformer_calls = 0;
  long infeasible = 0;
  long train_steps = 0;
};

// Uniform draw from the valid surface set: beta_r ~ U[0, 1] with the
// complementary beta_t (beta_r = 1 when reflect-only), phases uniform on the grid.
StarRisConfig random_surface_config(const SimParams& params, SurfaceMode mode, Rng& rng);

AgentConfig agent_config(const SimParams& params, Scheme scheme);

// Beam solve for the staged configuration of env.
BeamformingSolution solve_beams(const V2xEnv& env, const SolverOptions& opts);

class Runner {
 public:
  Runner(const ExperimentManifest& manifest, std::uint64_t seed);

  // Training episode with the scheduled epsilon.
  EpisodeRecord run_episode(int episode);
  // Greedy rollout on a held-out episode seed, without learning.
  EpisodeRecord evaluate_episode(std::uint64_t episode_seed);

  // Stages `action` (plus this scheme's random overrides), solves beams on the
  // schedule and finishes the step.
  StepResult play(const ActionTuple& action);
  ActionTuple greedy_action(const std::vector<double>& state) const;

  V2xEnv& env() { return env_; }
  const V2xEnv& env() const { return env_; }
  const RunCounters& counters() const { return counters_; }
  DqnAgent* agent() { return agent_.get(); }
  EpsilonGreedyBandit* bandit() { return bandit_.get(); }
  const ExperimentManifest& manifest() const { return manifest_; }
  std::uint64_t seed() const { return seed_; }
  double epsilon(int episode) const;

  // Online network plus a JSON sidecar (episode count, epsilon, train steps,
  // agent rng state). Bandit runs store their arm statistics in the sidecar.
  void save_checkpoint(const std::string& path_stem, int episode) const;
  // Restores the online and target networks (or bandit statistics) and the
  // agent rng. Returns the stored episode count.
  int load_checkpoint(const std::string& path_stem);

  static std::uint64_t training_episode_seed(std::uint64_t seed, int episode);
  static std::uint64_t heldout_episode_seed(std::uint64_t seed, int k);

 private:
  EpisodeRecord rollout(std::uint64_t episode_seed, int episode, double epsilon, bool learn);

  ExperimentManifest manifest_;
  std::uint64_t seed_;
  V2xEnv env_;
  SolverOptions solver_;
  std::unique_ptr<DqnAgent> agent_;
  std::unique_ptr<EpsilonGreedyBandit> bandit_;
  Rng override_rng_;
  RunCounters counters_;
  int infeasible_in_episode_ = 0;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;
  RunCounters counters;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

// Runs every episode of the manifest for one seed; writes checkpoints under
// `checkpoint_dir` when the manifest asks for them.
SeedRun run_seed(const ExperimentManifest& manifest, std::uint64_t seed, const std::string& checkpoint_dir = {},
                 const EpisodeCallback& on_episode = {});

// All seeds; when manifest.output_dir is set, writes manifest.json,
// metrics.csv, summary.json and cdf.csv there.
std::vector<SeedRun> run_manifest(const ExperimentManifest& manifest, const EpisodeCallback& on_episode = {});

}  // namespace starris
