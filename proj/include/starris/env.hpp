// SPDX-License-Identifier: Apache-2.0
//
// Resource-allocation MDP: factored action catalog, state encoding, and step
// dynamics with payload and latency bookkeeping. V2I beamformers are an
// exogenous input supplied between apply_action() and finish_step().

#pragma once

#include "starris/channel.hpp"
#include "starris/metrics.hpp"
#include "starris/scenario.hpp"
#include "starris/star_ris.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace starris {

inline constexpr std::array<double, 3> kAmplitudeFactors{0.9, 1.0, 1.1};
inline constexpr std::array<int, 3> kPhaseSteps{-1, 0, 1};

// Dimensions in order: spectrum choice per pair (I + 1 options, the last one
// meaning "no channel"), amplitude factor per group, reflection phase step per
// group, transmission phase step per group, power level per pair.
struct ActionCatalog {
  int n_vues = 0;
  int n_pairs = 0;
  int n_groups = 0;
  int power_levels = 0;
  std::vector<int> branch_sizes;

  int n_dims() const { return static_cast<int>(branch_sizes.size()); }
  int spectrum_dim(int v) const { return v; }
  int amplitude_dim(int g) const { return n_pairs + g; }
  int phase_r_dim(int g) const { return n_pairs + n_groups + g; }
  int phase_t_dim(int g) const { return n_pairs + 2 * n_groups + g; }
  int power_dim(int v) const { return n_pairs + 3 * n_groups + v; }
  // Product of branch sizes, as a double since it overflows quickly.
  double joint_cardinality() const;
};

ActionCatalog action_space(const SimParams& params);

struct ActionTuple {
  std::vector<int> spectrum;   // per pair: VUE index, or n_vues for none
  std::vector<int> amplitude;  // per group: index into kAmplitudeFactors
  std::vector<int> phase_r;    // per group: index into kPhaseSteps
  std::vector<int> phase_t;
  std::vector<int> power;  // per pair: level index

  bool operator==(const ActionTuple&) const = default;
};

std::vector<int> flatten(const ActionTuple& a, const ActionCatalog& cat);
ActionTuple unflatten(const std::vector<int>& flat, const ActionCatalog& cat);
// Throws InvalidAction if any index is outside its catalog.
void validate_action(const ActionTuple& a, const ActionCatalog& cat);
// Leaves everything as it is: keep spectrum/power, unit factor, zero steps.
ActionTuple identity_action(const ActionCatalog& cat, const std::vector<int>& spectrum, const std::vector<int>& power);

// Group of element n when N elements are split into G contiguous blocks.
int group_of_element(int n, int n_elements, int n_groups);

// Resolves per-pair channel requests into an exclusive allocation: requests
// are granted in pair order and a pair asking for a taken channel gets none.
SpectrumAllocation resolve_spectrum(const std::vector<int>& requests, int n_vues);

struct Transition {
  std::vector<double> state;
  std::vector<int> action;  // flattened
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

// Optional replacements applied instead of the agent's choices for the
// randomized benchmark schemes.
struct StepOverrides {
  std::optional<StarRisConfig> surface;
  std::optional<std::vector<int>> spectrum;
};

struct StepResult {
  Transition transition;
  LinkReport report;
  RewardTerms terms;
};

// Token layout used by the encoder; each token is `token_width` wide and starts
// with a three-way type one-hot (VUE, V2V pair, element group).
struct StateLayout {
  int n_tokens = 0;
  int token_width = 0;
  int size() const { return n_tokens * token_width; }
};

inline constexpr int kVueFeatures = 6;
inline constexpr int kPairFeatures = 8;
inline constexpr int kGroupFeatures = 3;
StateLayout state_layout(const SimParams& params);

class V2xEnv {
 public:
  V2xEnv(SimParams params, Scenario scenario, SurfaceMode mode = SurfaceMode::Star);

  const SimParams& params() const { return params_; }
  const Scenario& scenario() const { return scenario_; }
  const ActionCatalog& catalog() const { return catalog_; }
  StateLayout layout() const { return layout_; }
  SurfaceMode mode() const { return mode_; }

  // Starts an episode: fading block 0 of `seed`, full payloads, initial surface,
  // pair v on channel v (none beyond I), top power level, equal-power MRT beams.
  std::vector<double> reset(std::uint64_t seed);
  void set_scenario(Scenario scn) { scenario_ = std::move(scn); }

  // Stages the agent's action (surface increments, spectrum, power).
  void apply_action(const ActionTuple& action, const StepOverrides& overrides = {});
  // Beamformer inputs for the staged configuration on the current block.
  const std::vector<CVector>& staged_channels() const { return h_eff_; }
  const AllocationState& allocation() const { return alloc_; }
  void set_beamformers(std::vector<CVector> p);
  // Scores the staged configuration, updates payloads, draws the next block.
  StepResult finish_step();
  // apply_action + finish_step with the beamformers currently held.
  StepResult step(const ActionTuple& action, const StepOverrides& overrides = {});

  std::vector<double> encode() const;
  const ChannelSet& channels() const { return channels_; }
  const StarRisConfig& surface() const { return alloc_.ris; }
  const std::vector<double>& remaining_load() const { return load_; }
  const std::vector<double>& remaining_time() const { return time_left_; }
  const std::vector<int>& power_levels() const { return power_; }
  const std::vector<int>& spectrum_requests() const { return spectrum_; }
  int step_index() const { return step_; }
  bool done() const { return done_; }
  std::uint64_t episode_seed() const { return seed_; }

  // Equal-power phase-aligned beams sqrt(P/I) * conj(h)/|h| for the given channels.
  static std::vector<CVector> equal_power_mrt(const std::vector<CVector>& h, double p_total);

 private:
  void refresh_channels();
  void rebuild_allocation();

  SimParams params_;
  Scenario scenario_;
  SurfaceMode mode_;
  ActionCatalog catalog_;
  StateLayout layout_;

  std::uint64_t seed_ = 0;
  int step_ = 0;
  bool done_ = false;
  bool staged_ = false;
  ChannelSet channels_;
  std::vector<CVector> h_eff_;
  AllocationState alloc_;
  std::vector<int> spectrum_;  // per pair request, n_vues meaning none
  std::vector<int> power_;     // per pair level
  std::vector<double> load_;
  std::vector<double> time_left_;
  std::vector<double> last_gamma_v_;
  std::vector<double> state_before_;
  std::vector<int> action_flat_;
};

}  // namespace starris
