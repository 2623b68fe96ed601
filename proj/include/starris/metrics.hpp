// SPDX-License-Identifier: Apache-2.0
//
// SINRs, rates, interference aggregates, constraint flags and the RL reward.

#pragma once

#include "starris/channel.hpp"
#include "starris/star_ris.hpp"

#include <vector>

namespace starris {

// Spectrum sharing between V2V pairs and V2I channels. Stored as the channel
// chosen by each pair (or kNone), which makes a pair occupying two channels
// unrepresentable; construction rejects two pairs on one channel.
class SpectrumAllocation {
 public:
  static constexpr int kNone = -1;

  SpectrumAllocation() = default;
  SpectrumAllocation(int n_vues, std::vector<int> vue_of_pair);
  // Builds from a 0/1 matrix a[i][v]; throws InvalidAllocation on any row or
  // column sum above one or a non-binary entry.
  static SpectrumAllocation from_matrix(const std::vector<std::vector<int>>& a);

  int n_vues() const { return n_vues_; }
  int n_pairs() const { return static_cast<int>(vue_of_pair_.size()); }
  int vue_of_pair(int v) const { return vue_of_pair_.at(v); }
  // Pair sharing VUE i's channel, or kNone.
  int pair_of_vue(int i) const { return pair_of_vue_.at(i); }
  int a(int i, int v) const { return vue_of_pair_.at(v) == i ? 1 : 0; }
  const std::vector<int>& choices() const { return vue_of_pair_; }
  std::vector<std::vector<int>> matrix() const;

  bool operator==(const SpectrumAllocation&) const = default;

 private:
  int n_vues_ = 0;
  std::vector<int> vue_of_pair_;
  std::vector<int> pair_of_vue_;
};

struct AllocationState {
  SpectrumAllocation spectrum;
  std::vector<double> p_v2v;   // W per pair
  std::vector<CVector> p_v2i;  // beamformer per VUE, length B
  StarRisConfig ris;
};

// Transmit power of level k out of L: k / (L - 1) * P_vmax.
double power_of_level(int level, const SimParams& params);
// True when p equals one of the grid powers (within 1e-12 relative).
bool on_power_grid(double p, const SimParams& params);

struct LinkReport {
  std::vector<double> signal_i;  // |h_i p_i|^2, W
  std::vector<double> g_v;       // V2V interference at the BS on VUE i's channel, W
  std::vector<double> gamma_i;
  std::vector<double> rate_i;  // bit/s
  std::vector<double> g_i;     // V2I interference at pair v's receiver, W
  std::vector<double> gamma_v;
  std::vector<double> rate_v;
  std::vector<bool> qos_ok;
  std::vector<bool> latency_ok;
  std::vector<bool> outage_ok;

  double sum_rate_i() const;
  int latency_satisfied() const;
  int outage_satisfied() const;
  bool all_ok() const;
};

double rate_of(double sinr, const SimParams& params);

// gamma_0 / ln(1 / (1 - p_0)); gamma_0 itself when threshold_is_effective.
double effective_outage_threshold(const SimParams& params);
// SINR floor 2^(R_min / x) - 1 matching R_i >= R_min (x = W0 or B).
double qos_sinr_floor(const SimParams& params);

double v2i_interference(const ChannelSet& cs, const AllocationState& alloc, int i);
double v2i_sinr(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc, int i,
                const SimParams& params);
double v2v_interference(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc, int v,
                        const SimParams& params);
double v2v_sinr(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc, int v,
                const SimParams& params);

// Full report on precomputed effective channels, or composing them from
// alloc.ris when none are given.
LinkReport evaluate(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc,
                    const SimParams& params);
LinkReport evaluate(const ChannelSet& cs, const AllocationState& alloc, const SimParams& params);

// Fills the three flag vectors of an otherwise computed report.
void check_constraints(LinkReport& report, const SimParams& params);

struct RewardTerms {
  double throughput = 0.0;
  double qos = 0.0;
  double latency = 0.0;
  double outage = 0.0;
  double total() const { return throughput + qos + latency + outage; }
};

// F(x) = P0 for x >= 0, x otherwise.
double revenue(double x, const SimParams& params);

// Rates enter normalized by W0. The outage slack is measured relative to the
// effective threshold, signed so that it is non-negative exactly when the
// configured outage constraint holds.
RewardTerms reward_terms(const LinkReport& report, const SimParams& params);
double reward(const LinkReport& report, const SimParams& params);
// Value of the reward with every constraint met, for the report's rates.
double reward_upper_bound(const LinkReport& report, const SimParams& params);

}  // namespace starris
