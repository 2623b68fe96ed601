// SPDX-License-Identifier: Apache-2.0
//
// V2I digital beamforming for a fixed spectrum allocation, surface and V2V
// powers: sum-rate maximization under the power ball, the per-VUE SINR floor
// and the V2V outage rows, solved by successive convex approximation with a
// log-barrier Newton inner solver.

#pragma once

#include "starris/metrics.hpp"

#include <vector>

namespace starris {

struct BeamformingProblem {
  std::vector<CVector> h;             // effective channel per VUE, length B
  std::vector<double> interference;   // V2V interference at the BS per VUE, W
  SpectrumAllocation spectrum;
  std::vector<double> v2v_signal;     // p_v |h_v|^2 per pair, W
  std::vector<double> v2v_rx_gain;    // |V2I -> V2V-receiver gain|^2 of the sharing VUE per pair
  double noise_w = 0.0;
  double p_max_w = 0.0;
  double mu_floor = 0.0;  // SINR floor of every VUE
  double gamma_ef = 0.0;
  double bandwidth = 1.0;
  OutageSense outage_sense = OutageSense::Upper;
  V2vInterferencePath interference_path = V2vInterferencePath::BsChannel;

  int n_vues() const { return static_cast<int>(h.size()); }
  int n_antennas() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
  // Throws ConfigError / ShapeMismatch.
  void validate() const;
};

BeamformingProblem make_problem(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc,
                                const SimParams& params);

enum class SolveStatus { Optimal, MaxIters, Infeasible };
std::string to_string(SolveStatus s);

struct BeamformingSolution {
  std::vector<CVector> p;
  std::vector<double> mu;  // SINR lower bounds
  std::vector<double> xi;  // interference-plus-noise slacks, W
  std::vector<double> trace;  // sum of W0 log2(1 + mu) after each SCA iteration
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
  double sum_rate = 0.0;  // bit/s, from the actual SINRs of p
};

struct SolverOptions {
  int max_iters = 50;
  double tol_rel = 1e-6;
  bool xi_free = false;
  bool linearize_reverse_convex = true;
};
SolverOptions solver_options(const SimParams& params);

// First-order expansion of sqrt(xi * mu) at (xi0, mu0); never below the true
// value since the square root of a product is concave. Throws
// DegenerateExpansionPoint unless both expansion coordinates are positive.
double taylor_sqrt_lower_bound(double xi_prev, double mu_prev, double xi, double mu);

// {p : ||stack(p)||_2 <= sqrt(P_max)} with its radial projection.
struct NormBall {
  double radius = 0.0;
  bool contains(const std::vector<CVector>& p, double tol = 1e-12) const;
  std::vector<CVector> project(std::vector<CVector> p) const;
};
NormBall relax_power_constraint(double p_max_w);
double stacked_norm(const std::vector<CVector>& p);

// Actual SINR of every VUE under beams p.
std::vector<double> beam_sinrs(const BeamformingProblem& prob, const std::vector<CVector>& p);
double beam_sum_rate(const BeamformingProblem& prob, const std::vector<CVector>& p);
// Largest violation of the true constraints (power ball, SINR floor, V2V
// outage rows), each measured relative to its own scale; <= 0 when feasible.
double max_violation(const BeamformingProblem& prob, const std::vector<CVector>& p);

// Equal-power phase-aligned start; runs a slack-minimization phase when that
// start violates a constraint. Status is Infeasible when no strictly feasible
// point exists, with p set to the least-violating point found.
BeamformingSolution feasibility_restore(const BeamformingProblem& prob, const SolverOptions& opts = {});

BeamformingSolution sca_solve(const BeamformingProblem& prob, const BeamformingSolution* init = nullptr,
                              const SolverOptions& opts = {});

// Exhaustive search over p on a magnitude x phase grid, for one VUE with one
// antenna. Returns the best feasible sum rate (bit/s), or -1 if no grid point
// is feasible.
struct GridOracleResult {
  double sum_rate = -1.0;
  cplx p{0.0, 0.0};
  int feasible_points = 0;
};
GridOracleResult grid_oracle(const BeamformingProblem& prob, int magnitudes = 400, int phases = 64);

}  // namespace starris
