#include <doctest.h>

#include "approx.hpp"

#include "starris/channel.hpp"

#include <algorithm>

using namespace starris;

namespace {

SimParams plain() {
  SimParams p = default_params();
  p.ref_gain_db = -40.0;
  p.pathloss_exp = 4.0;
  p.surface_pathloss_exp = 4.0;
  return p;
}

double mean_power(const std::vector<cplx>& xs) {
  double s = 0.0;
  for (auto x : xs) s += std::norm(x);
  return s / xs.size();
}

}  // namespace

TEST_CASE("Rayleigh mean power follows eta d^-delta") {
  const SimParams p = plain();
  Rng rng(1);
  std::vector<cplx> xs;
  for (int k = 0; k < 100000; ++k) xs.push_back(rayleigh_link(10.0, 1, p, rng)[0]);
  CHECK(mean_power(xs) == rel(1e-8).epsilon(0.03));

  Rng rng2(2);
  std::vector<cplx> unit;
  for (int k = 0; k < 20000; ++k) unit.push_back(rayleigh_link(1.0, 1, p, rng2)[0]);
  CHECK(mean_power(unit) == rel(1e-4).epsilon(0.03));
  CHECK_THROWS_AS(rayleigh_link(0.0, 1, p, rng), DegenerateGeometry);
}

TEST_CASE("Rayleigh phase is uniform (Kolmogorov-Smirnov)") {
  const SimParams p = plain();
  Rng rng(3);
  const int n = 10000;
  std::vector<double> u;
  for (int k = 0; k < n; ++k) {
    double a = std::arg(rayleigh_link(5.0, 1, p, rng)[0]);
    if (a < 0) a += kTwoPi;
    u.push_back(a / kTwoPi);
  }
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int k = 0; k < n; ++k) d = std::max({d, (k + 1.0) / n - u[k], u[k] - static_cast<double>(k) / n});
  // 1% critical value of the one-sample KS statistic
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Rician limits and power split") {
  SimParams p = plain();
  const CVector los = steering_vector(4, 0.3, 0.5);
  const double scale2 = 1e-4 * std::pow(20.0, -4.0);

  p.rician_k = 1e9;
  Rng rng(4);
  std::vector<cplx> xs;
  for (int k = 0; k < 2000; ++k) xs.push_back(rician_link(20.0, los, p, rng)[2]);
  cplx mean = 0.0;
  for (auto x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (auto x : xs) var += std::norm(x - mean);
  var /= xs.size();
  CHECK(var / scale2 < 1e-6);
  CHECK(std::abs(mean - std::sqrt(scale2) * los[2]) / std::sqrt(scale2) < 1e-4);

  for (double k : {0.0, 10.0}) {
    p.rician_k = k;
    Rng r(5);
    std::vector<cplx> ys;
    for (int j = 0; j < 100000; ++j) ys.push_back(rician_link(20.0, los, p, r)[1]);
    CHECK(mean_power(ys) == rel(scale2).epsilon(0.03));
    cplx m = 0.0;
    for (auto y : ys) m += y;
    m /= static_cast<double>(ys.size());
    const double los_fraction = std::norm(m) / mean_power(ys);
    CHECK(std::abs(los_fraction - k / (1.0 + k)) < 0.01);
  }
}

TEST_CASE("surface to BS matrix") {
  const SimParams p = plain();
  const Scenario s = drop_scenario(p, 1);
  const CMatrix h = ris_bs_link(s, p);
  REQUIRE(h.rows() == p.n_elements);
  REQUIRE(h.cols() == p.n_antennas);
  const double expect = std::sqrt(1e-4 * std::pow(61.032778078668514, -4.0) * 10.0 / 11.0);
  for (int n = 0; n < h.rows(); ++n)
    for (int b = 0; b < h.cols(); ++b) CHECK(std::abs(h(n, b)) == rel(expect).epsilon(1e-12));
  Eigen::JacobiSVD<CMatrix> svd(h);
  CHECK(svd.singularValues()(1) / svd.singularValues()(0) < 1e-12);
}

TEST_CASE("channel draws are seeded per link") {
  SimParams p = desk_profile();
  const Scenario s = drop_scenario(p, 2);
  const ChannelSet a = draw_channels(s, p, 9, 0);
  const ChannelSet b = draw_channels(s, p, 9, 0);
  CHECK(a.h_direct[1] == b.h_direct[1]);
  CHECK(a.h_v2i_to_v2vrx == b.h_v2i_to_v2vrx);
  const ChannelSet c = draw_channels(s, p, 9, 1);
  CHECK_FALSE(a.h_direct[1] == c.h_direct[1]);
  // the surface-to-BS path is deterministic
  CHECK(a.h_ris_bs == c.h_ris_bs);
  CHECK(static_cast<int>(a.h_vue_ris.size()) == p.n_vues);
  CHECK(a.h_vue_ris[0].size() == p.n_elements);
  for (int i = 0; i < p.n_vues; ++i)
    CHECK((a.side[i] == Side::Reflection) == (s.vue_position(i).y < s.ris_position.y));

  // Removing a pair leaves every other link untouched.
  SimParams fewer = p;
  fewer.n_v2v_pairs = 1;
  const Scenario s1 = drop_scenario(fewer, 2);
  const ChannelSet d = draw_channels(s1, fewer, 9, 0);
  CHECK(d.h_v2v[0] == a.h_v2v[0]);
  CHECK(d.h_direct[3] == a.h_direct[3]);
}

TEST_CASE("effective channel composition") {
  SimParams p = desk_profile();
  const Scenario s = drop_scenario(p, 4);
  const ChannelSet cs = draw_channels(s, p, 1, 0);
  StarRisConfig off = initial_config(p, SurfaceMode::Star);
  std::fill(off.beta_r.begin(), off.beta_r.end(), 0.0);
  std::fill(off.beta_t.begin(), off.beta_t.end(), 0.0);
  CHECK(effective_v2i_channel(cs, off, 0) == cs.h_direct[0]);

  // Scalar hand expansion with N = B = 1.
  ChannelSet one;
  one.h_direct = {CVector::Constant(1, cplx(0.3, -0.1))};
  one.h_vue_ris = {CVector::Constant(1, cplx(-0.2, 0.7))};
  one.h_ris_bs = CMatrix::Constant(1, 1, cplx(0.5, 0.25));
  one.side = {Side::Transmission};
  StarRisConfig c1 = initial_config(1, 2, SurfaceMode::Star);
  c1.beta_r = {0.6};
  c1.beta_t = {0.8};
  c1.kappa_t = {3};
  const cplx expect = cplx(0.3, -0.1) + cplx(-0.2, 0.7) * std::polar(0.8, 1.5 * kPi) * cplx(0.5, 0.25);
  CHECK(std::abs(effective_v2i_channel(one, c1, 0)[0] - expect) < 1e-12);

  // Affine in each element coefficient: finite-difference slope in beta.
  const int i = 1;
  const Face face = cs.side[i] == Side::Reflection ? Face::Reflection : Face::Transmission;
  StarRisConfig c = initial_config(p, SurfaceMode::Star);
  c.kappa_r[2] = 1;
  c.kappa_t[2] = 3;
  StarRisConfig c2 = c;
  const double db = 1e-3;
  (face == Face::Reflection ? c2.beta_r : c2.beta_t)[2] += db;
  const CVector slope = (effective_v2i_channel(cs, c2, i) - effective_v2i_channel(cs, c, i)) / db;
  const double theta = face == Face::Reflection ? c.theta_r(2) : c.theta_t(2);
  const CVector analytic = cs.h_vue_ris[i][2] * std::polar(1.0, theta) * cs.h_ris_bs.row(2).transpose();
  CHECK((slope - analytic).norm() <= 1e-9 * analytic.norm() + 1e-30);

  // Element-disjoint supports superpose.
  StarRisConfig a = off, b = off;
  for (int n = 0; n < 4; ++n) a.beta_r[n] = a.beta_t[n] = 0.5;
  for (int n = 4; n < 8; ++n) b.beta_r[n] = b.beta_t[n] = 0.7;
  StarRisConfig ab = off;
  for (int n = 0; n < 8; ++n) {
    ab.beta_r[n] = n < 4 ? 0.5 : 0.7;
    ab.beta_t[n] = ab.beta_r[n];
  }
  const CVector lhs = effective_v2i_channel(cs, ab, i) - cs.h_direct[i];
  const CVector rhs = (effective_v2i_channel(cs, a, i) - cs.h_direct[i]) + (effective_v2i_channel(cs, b, i) - cs.h_direct[i]);
  CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
}

TEST_CASE("mean power decreases with distance") {
  const SimParams p = plain();
  double prev = 1e300;
  for (double d : {2.0, 5.0, 10.0, 30.0, 80.0}) {
    Rng rng(static_cast<std::uint64_t>(d * 10));
    std::vector<cplx> xs;
    for (int k = 0; k < 20000; ++k) xs.push_back(rayleigh_link(d, 1, p, rng)[0]);
    const double m = mean_power(xs);
    CHECK(m == rel(1e-4 * std::pow(d, -4.0)).epsilon(0.03));
    CHECK(m < prev);
    prev = m;
  }
}
