#include <doctest.h>

#include "approx.hpp"

#include "starris/params.hpp"

using namespace starris;

TEST_CASE("defaults follow the parameter table") {
  const SimParams p = default_params();
  CHECK(p.pathloss_exp == 4.0);
  CHECK(p.rician_k == 10.0);
  CHECK(p.noise_psd_dbm_hz == -174.0);
  CHECK(p.n_vues == 20);
  CHECK(p.n_v2v_pairs == 6);
  CHECK(p.discount == 0.98);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("noise power integrates the PSD over the channel bandwidth") {
  SimParams p;
  p.bandwidth_w0 = 10e6;
  // -174 dBm/Hz + 70 dB = -104 dBm
  CHECK(p.noise_power_w() == rel(std::pow(10.0, -13.4)).epsilon(1e-12));
}

TEST_CASE("BS to surface distance") {
  const SimParams p;
  CHECK(distance(p.bs_position, p.ris_position) == rel(std::sqrt(3600.0 + 100.0 + 25.0)));
  CHECK(distance(p.bs_position, p.ris_position) == rel(61.0328).epsilon(1e-6));
}

TEST_CASE("config text round trip and overrides") {
  SimParams p = desk_profile();
  const std::string text = to_config_text(p);
  SimParams q = default_params();
  apply_config_text(q, text);
  CHECK(to_config_text(q) == text);
  CHECK(params_hash(p) == params_hash(q));

  set_param(q, "n_elements", "16");
  CHECK(q.n_elements == 16);
  CHECK(get_param(q, "n_elements") == "16");
  CHECK(params_hash(p) != params_hash(q));
  set_param(q, "outage_sense", "upper");
  CHECK(q.outage_sense == OutageSense::Upper);
}

TEST_CASE("config errors") {
  SimParams p;
  CHECK_THROWS_AS(set_param(p, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(set_param(p, "n_elements", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(p, "n_elements 3"), ConfigError);
  p.outage_prob = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = SimParams{};
  p.element_groups = p.n_elements + 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  SimParams p;
  apply_config_text(p, "# header\n\n n_vues = 3  # trailing\nrician_k=2.5\n");
  CHECK(p.n_vues == 3);
  CHECK(p.rician_k == 2.5);
}
