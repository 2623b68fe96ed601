#include <doctest.h>

#include "approx.hpp"

#include "starris/star_ris.hpp"

#include <random>

using namespace starris;

TEST_CASE("quantized phases") {
  CHECK(quantize_phase(0, 1) == 0.0);
  CHECK(quantize_phase(0, 5) == 0.0);
  CHECK(quantize_phase(3, 2) == rel(3.0 * kPi / 2.0));
  CHECK(quantize_phase(7, 3) == rel(7.0 * kPi / 4.0));
  CHECK(quantize_phase(7, 3) < kTwoPi);
  CHECK_THROWS_AS(quantize_phase(4, 2), IndexOutOfRange);
  CHECK_THROWS_AS(quantize_phase(-1, 2), IndexOutOfRange);
}

TEST_CASE("coefficient matrices") {
  StarRisConfig ro = initial_config(4, 2, SurfaceMode::ReflectOnly);
  const CMatrix phi = coefficient_matrix(ro, Face::Reflection);
  CHECK((phi - CMatrix::Identity(4, 4)).norm() == 0.0);
  CHECK(coefficient_matrix(ro, Face::Transmission).norm() == 0.0);

  StarRisConfig c = initial_config(3, 2, SurfaceMode::Star);
  c.beta_r[1] = 0.6;
  c.beta_t[1] = 0.8;
  c.kappa_r[1] = 1;
  const CMatrix r = coefficient_matrix(c, Face::Reflection);
  CHECK(std::abs(r(1, 1) - cplx(0.0, 0.6)) < 1e-15);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(r(i, j) == cplx(0.0, 0.0));
  const CMatrix t = coefficient_matrix(c, Face::Transmission);
  for (int n = 0; n < 3; ++n) CHECK(std::norm(r(n, n)) + std::norm(t(n, n)) == rel(1.0).epsilon(1e-14));
}

TEST_CASE("amplitude increments") {
  StarRisConfig c = initial_config(2, 2, SurfaceMode::Star);
  c.beta_r = {0.6, 0.99};
  c.beta_t = {0.8, std::sqrt(1.0 - 0.99 * 0.99)};
  CHECK(apply_amplitude_increment(c, {1.0, 1.0}, 1e-3) == c);

  const StarRisConfig u = apply_amplitude_increment(c, {1.1, 1.1}, 1e-3);
  CHECK(u.beta_r[0] == rel(0.66).epsilon(1e-15));
  CHECK(u.beta_t[0] == rel(0.751265598839718).epsilon(1e-14));
  CHECK(u.beta_r[1] == 1.0 - 1e-3);
  CHECK(u.beta_t[1] == rel(std::sqrt(1.0 - (1.0 - 1e-3) * (1.0 - 1e-3))));
  CHECK(u.kappa_r == c.kappa_r);

  const StarRisConfig ro = initial_config(2, 2, SurfaceMode::ReflectOnly);
  CHECK(apply_amplitude_increment(ro, {0.9, 1.1}, 1e-3) == ro);

  const StarRisConfig uni = apply_amplitude_increment(c, {0.9, 1.1}, 1e-3, true);
  CHECK(uni.beta_r[0] == uni.beta_r[1]);
}

TEST_CASE("phase increments wrap on the grid") {
  StarRisConfig c = initial_config(1, 3, SurfaceMode::Star);
  c.kappa_r[0] = 7;
  const StarRisConfig w = apply_phase_increment(c, {kPi / 2.0}, {0.0});
  CHECK(w.theta_r(0) == rel(kPi / 4.0));
  CHECK(apply_phase_increment(c, {0.0}, {0.0}) == c);
  CHECK_THROWS_AS(apply_phase_increment(c, {0.1}, {0.0}), OffGridIncrement);
  const StarRisConfig back = apply_phase_increment(c, {-kPi / 4.0 * 9.0}, {kPi / 4.0});
  CHECK(back.kappa_r[0] == 6);
  CHECK(back.kappa_t[0] == 1);
}

TEST_CASE("random mutation sequences keep every invariant") {
  Rng rng(5);
  std::uniform_int_distribution<int> pick3(0, 2);
  const double factors[3] = {0.9, 1.0, 1.1};
  for (SurfaceMode mode : {SurfaceMode::Star, SurfaceMode::ReflectOnly}) {
    StarRisConfig c = initial_config(8, 2, mode);
    for (int step = 0; step < 2000; ++step) {
      std::vector<double> d(8);
      std::vector<int> sr(8), st(8);
      for (int n = 0; n < 8; ++n) {
        d[n] = factors[pick3(rng)];
        sr[n] = pick3(rng) - 1;
        st[n] = pick3(rng) - 1;
      }
      c = apply_phase_steps(apply_amplitude_increment(c, d, 1e-3), sr, st);
      REQUIRE(energy_split_error(c) < 1e-12);
      REQUIRE(on_grid(c));
      if (mode == SurfaceMode::ReflectOnly) {
        REQUIRE(c.beta_r == std::vector<double>(8, 1.0));
        REQUIRE(c.beta_t == std::vector<double>(8, 0.0));
      }
      const CVector r = coefficients(c, Face::Reflection);
      const CVector t = coefficients(c, Face::Transmission);
      for (int n = 0; n < 8; ++n) {
        REQUIRE(std::abs(r[n]) <= 1.0);
        REQUIRE(std::abs(t[n]) <= 1.0);
      }
    }
  }
}
