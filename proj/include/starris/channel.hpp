// SPDX-License-Identifier: Apache-2.0
//
// Channel realizations: Rayleigh direct links, Rician surface hops, the
// line-of-sight surface-to-BS matrix, and the composed effective V2I channel.

#pragma once

#include "starris/scenario.hpp"
#include "starris/star_ris.hpp"

#include <cstdint>
#include <vector>

namespace starris {

// Which surface face serves a VUE: reflection below the surface (y < y_ris),
// transmission otherwise.
enum class Side { Reflection, Transmission };

struct ChannelSet {
  std::vector<CVector> h_direct;   // per VUE, length B (VUE -> BS)
  std::vector<CVector> h_vue_ris;  // per VUE, length N (VUE -> surface)
  CMatrix h_ris_bs;                // N x B (surface -> BS)
  std::vector<cplx> h_v2v;         // per pair, transmitter -> receiver
  std::vector<cplx> h_v2v_to_bs;   // per pair, transmitter -> BS
  CMatrix h_v2i_to_v2vrx;          // I x V, VUE i -> receiver of pair v
  std::vector<Side> side;          // per VUE

  int n_vues() const { return static_cast<int>(h_direct.size()); }
  int n_pairs() const { return static_cast<int>(h_v2v.size()); }
  int n_antennas() const { return static_cast<int>(h_ris_bs.cols()); }
  int n_elements() const { return static_cast<int>(h_ris_bs.rows()); }
};

// ULA response exp(-j*2*pi*spacing*k*u) for k = 0..n-1, u the direction cosine
// along the array axis.
CVector steering_vector(int n, double direction_cosine, double spacing_wl);

// Direction cosine of `to` seen from `from` along the x axis.
double direction_cosine(const Vec3& from, const Vec3& to);

// sqrt(eta d^-delta) * CN(0, I), using params.pathloss_exp.
CVector rayleigh_link(double distance, int length, const SimParams& params, Rng& rng);

// Rician link with the given line-of-sight response, using
// params.surface_pathloss_exp and params.rician_k.
CVector rician_link(double distance, const CVector& los_steering, const SimParams& params, Rng& rng);

// Deterministic rank-one line-of-sight surface -> BS matrix (N x B).
CMatrix ris_bs_link(const Scenario& scn, const SimParams& params);

Side side_of_surface(const Vec3& vue, const Vec3& ris);

// Draws every link for one coherence block. Each link has its own stream
// derived from (seed, block, link kind, indices), so realizations of a link do
// not depend on how many other links exist.
ChannelSet draw_channels(const Scenario& scn, const SimParams& params, std::uint64_t seed, std::uint64_t block);

// h_direct[i] + H^T (phi_side .* h_vue_ris[i]), i.e. the row channel h_i such
// that the received amplitude is h_i^T p_i.
CVector effective_v2i_channel(const ChannelSet& cs, const StarRisConfig& ris, int i);
std::vector<CVector> effective_v2i_channels(const ChannelSet& cs, const StarRisConfig& ris);

// h^T p without conjugation.
inline cplx apply_beam(const CVector& h, const CVector& p) { return (h.array() * p.array()).sum(); }

}  // namespace starris
