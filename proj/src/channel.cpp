// SPDX-License-Identifier: Apache-2.0

#include "starris/channel.hpp"

#include <algorithm>

namespace starris {

namespace {

enum LinkKind : std::uint64_t {
  kDirect = 1,
  kVueRis = 2,
  kV2v = 3,
  kV2vToBs = 4,
  kV2iToV2vRx = 5,
};

void require_positive(double d) {
  if (!(d > 0.0)) throw DegenerateGeometry("link distance must be positive, got " + std::to_string(d));
}

CVector complex_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CVector v(n);
  for (int k = 0; k < n; ++k) {
    const double re = g(rng);
    const double im = g(rng);
    v[k] = {re, im};
  }
  return v;
}

// Below the 1 m reference distance the pathloss law is not meaningful.
double link_distance(const Vec3& a, const Vec3& b) { return std::max(distance(a, b), 1.0); }

}  // namespace

CVector steering_vector(int n, double direction_cosine, double spacing_wl) {
  CVector a(n);
  for (int k = 0; k < n; ++k) a[k] = std::polar(1.0, -kTwoPi * spacing_wl * k * direction_cosine);
  return a;
}

double direction_cosine(const Vec3& from, const Vec3& to) {
  const double d = distance(from, to);
  require_positive(d);
  return (to.x - from.x) / d;
}

CVector rayleigh_link(double distance, int length, const SimParams& params, Rng& rng) {
  require_positive(distance);
  const double scale = std::sqrt(params.ref_gain() * std::pow(distance, -params.pathloss_exp));
  return scale * complex_gaussian(length, rng);
}

CVector rician_link(double distance, const CVector& los_steering, const SimParams& params, Rng& rng) {
  require_positive(distance);
  const double k = params.rician_k;
  const double scale = std::sqrt(params.ref_gain() * std::pow(distance, -params.surface_pathloss_exp));
  const double w_los = std::sqrt(k / (1.0 + k));
  const double w_nlos = std::sqrt(1.0 / (1.0 + k));
  const CVector nlos = complex_gaussian(static_cast<int>(los_steering.size()), rng);
  return scale * (w_los * los_steering + w_nlos * nlos);
}

CMatrix ris_bs_link(const Scenario& scn, const SimParams& params) {
  const double d = distance(scn.ris_position, scn.bs_position);
  require_positive(d);
  const double k = params.rician_k;
  const double scale = std::sqrt(params.ref_gain() * std::pow(d, -params.surface_pathloss_exp) * k / (1.0 + k));
  const CVector a_ris =
      steering_vector(params.n_elements, direction_cosine(scn.ris_position, scn.bs_position), params.element_spacing_wl);
  const CVector a_bs =
      steering_vector(params.n_antennas, direction_cosine(scn.bs_position, scn.ris_position), params.element_spacing_wl);
  return scale * (a_ris * a_bs.transpose());
}

Side side_of_surface(const Vec3& vue, const Vec3& ris) {
  return vue.y < ris.y ? Side::Reflection : Side::Transmission;
}

ChannelSet draw_channels(const Scenario& scn, const SimParams& params, std::uint64_t seed, std::uint64_t block) {
  const int n_vue = scn.n_vues();
  const int n_pair = scn.n_pairs();
  const double direct_loss = std::sqrt(db_to_linear(-params.direct_excess_loss_db));

  ChannelSet cs;
  cs.h_ris_bs = ris_bs_link(scn, params);
  cs.h_direct.reserve(n_vue);
  cs.h_vue_ris.reserve(n_vue);
  for (int i = 0; i < n_vue; ++i) {
    const Vec3& pos = scn.vue_position(i);
    {
      Rng rng(derive_seed(seed, block, kDirect, i));
      cs.h_direct.push_back(direct_loss * rayleigh_link(link_distance(pos, scn.bs_position), params.n_antennas,
                                                        params, rng));
    }
    {
      Rng rng(derive_seed(seed, block, kVueRis, i));
      const CVector los = steering_vector(params.n_elements, direction_cosine(scn.ris_position, pos),
                                          params.element_spacing_wl);
      cs.h_vue_ris.push_back(rician_link(link_distance(pos, scn.ris_position), los, params, rng));
    }
    cs.side.push_back(side_of_surface(pos, scn.ris_position));
  }

  cs.h_v2v.reserve(n_pair);
  cs.h_v2v_to_bs.reserve(n_pair);
  cs.h_v2i_to_v2vrx = CMatrix::Zero(n_vue, n_pair);
  for (int v = 0; v < n_pair; ++v) {
    const Vec3& tx = scn.tx_position(v);
    const Vec3& rx = scn.rx_position(v);
    {
      Rng rng(derive_seed(seed, block, kV2v, v));
      cs.h_v2v.push_back(rayleigh_link(link_distance(tx, rx), 1, params, rng)[0]);
    }
    {
      Rng rng(derive_seed(seed, block, kV2vToBs, v));
      cs.h_v2v_to_bs.push_back(direct_loss * rayleigh_link(link_distance(tx, scn.bs_position), 1, params, rng)[0]);
    }
    for (int i = 0; i < n_vue; ++i) {
      Rng rng(derive_seed(seed, block, kV2iToV2vRx, i, v));
      cs.h_v2i_to_v2vrx(i, v) = rayleigh_link(link_distance(scn.vue_position(i), rx), 1, params, rng)[0];
    }
  }
  return cs;
}

CVector effective_v2i_channel(const ChannelSet& cs, const StarRisConfig& ris, int i) {
  if (i < 0 || i >= cs.n_vues()) throw IndexOutOfRange("VUE index " + std::to_string(i));
  if (ris.n_elements() != cs.n_elements())
    throw ShapeMismatch("surface has " + std::to_string(ris.n_elements()) + " elements, channel expects " +
                        std::to_string(cs.n_elements()));
  const Face face = cs.side[i] == Side::Reflection ? Face::Reflection : Face::Transmission;
  const CVector phi = coefficients(ris, face);
  const CVector weighted = phi.array() * cs.h_vue_ris[i].array();
  return cs.h_direct[i] + cs.h_ris_bs.transpose() * weighted;
}

std::vector<CVector> effective_v2i_channels(const ChannelSet& cs, const StarRisConfig& ris) {
  std::vector<CVector> out;
  out.reserve(cs.n_vues());
  for (int i = 0; i < cs.n_vues(); ++i) out.push_back(effective_v2i_channel(cs, ris, i));
  return out;
}

}  // namespace starris
