#include <doctest.h>

#include "approx.hpp"

#include "starris/env.hpp"

#include <random>

using namespace starris;

namespace {

SimParams small() {
  SimParams p = desk_profile();
  p.n_vues = 2;
  p.n_v2v_pairs = 1;
  p.n_elements = 4;
  p.element_groups = 2;
  p.phase_bits = 2;
  p.power_levels = 4;
  return p;
}

ActionTuple random_action(const ActionCatalog& cat, Rng& rng) {
  std::vector<int> flat;
  for (int b : cat.branch_sizes) flat.push_back(std::uniform_int_distribution<int>(0, b - 1)(rng));
  return unflatten(flat, cat);
}

}  // namespace

TEST_CASE("catalog layout") {
  SimParams p = small();
  p.element_groups = 2;
  const ActionCatalog cat = action_space(p);
  CHECK(cat.n_dims() == 1 + 2 + 4 + 1);
  CHECK(cat.branch_sizes == std::vector<int>{3, 3, 3, 3, 3, 3, 3, 4});
  CHECK(cat.joint_cardinality() == 3.0 * 729.0 * 4.0);
  p.element_groups = p.n_elements;
  CHECK(action_space(p).n_dims() == 1 + 3 * p.n_elements + 1);
}

TEST_CASE("flatten round trip and validation") {
  const ActionCatalog cat = action_space(small());
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const ActionTuple a = random_action(cat, rng);
    CHECK(unflatten(flatten(a, cat), cat) == a);
  }
  ActionTuple bad = identity_action(cat, {0}, {0});
  bad.power = {4};
  CHECK_THROWS_AS(validate_action(bad, cat), InvalidAction);
  CHECK_THROWS_AS(unflatten({0, 0}, cat), InvalidAction);
}

TEST_CASE("spectrum conflicts resolve in pair order") {
  const SpectrumAllocation a = resolve_spectrum({1, 1, 3, 0}, 3);
  CHECK(a.choices() == std::vector<int>{1, SpectrumAllocation::kNone, SpectrumAllocation::kNone, 0});
}

TEST_CASE("reset is deterministic and fills payloads") {
  const SimParams p = small();
  const Scenario s = drop_scenario(p, 5);
  V2xEnv a(p, s), b(p, s);
  const auto sa = a.reset(77);
  CHECK(sa == b.reset(77));
  CHECK(sa.size() == static_cast<std::size_t>(state_layout(p).size()));
  // tokens: 2 VUEs + 1 pair + 2 groups, 3 type flags + 8 features
  CHECK(sa.size() == (2 + 1 + 2) * 11u);
  for (double d : a.remaining_load()) CHECK(d == p.payload_bits);
  CHECK_FALSE(a.reset(78) == sa);
}

TEST_CASE("identity action leaves the surface alone") {
  const SimParams p = small();
  V2xEnv env(p, drop_scenario(p, 5));
  env.reset(1);
  const StarRisConfig before = env.surface();
  env.step(identity_action(env.catalog(), env.spectrum_requests(), env.power_levels()));
  CHECK(env.surface() == before);
}

TEST_CASE("payload bookkeeping and episode end") {
  SimParams p = small();
  p.payload_bits = 1e12;  // never delivered
  V2xEnv env(p, drop_scenario(p, 5));
  env.reset(3);
  Rng rng(9);
  const double dt = p.time_budget_s / p.steps_per_episode;
  double sent = 0.0;
  int steps = 0;
  bool done = false;
  while (!done) {
    const StepResult r = env.step(random_action(env.catalog(), rng));
    sent += r.report.rate_v[0] * dt;
    done = r.transition.done;
    ++steps;
    CHECK(env.remaining_load()[0] == rel(p.payload_bits - sent).epsilon(1e-12));
  }
  CHECK(steps == p.steps_per_episode);
  CHECK(env.remaining_time()[0] == 0.0);
  CHECK_THROWS_AS(env.step(random_action(env.catalog(), rng)), Error);

  p.payload_bits = 1.0;  // delivered at the first step with any rate
  V2xEnv quick(p, drop_scenario(p, 5));
  quick.reset(3);
  const StepResult r = quick.step(identity_action(quick.catalog(), {0}, {p.power_levels - 1}));
  CHECK(quick.remaining_load()[0] == 0.0);
  CHECK(r.transition.done);
}

TEST_CASE("transitions chain states") {
  SimParams p = small();
  p.payload_bits = 1e12;
  V2xEnv env(p, drop_scenario(p, 5));
  auto s = env.reset(4);
  Rng rng(1);
  for (int k = 0; k < 5; ++k) {
    const StepResult r = env.step(random_action(env.catalog(), rng));
    CHECK(r.transition.state == s);
    s = r.transition.next_state;
    CHECK(std::isfinite(r.transition.reward));
  }
}

TEST_CASE("surface and spectrum overrides") {
  const SimParams p = small();
  V2xEnv env(p, drop_scenario(p, 5));
  env.reset(4);
  StarRisConfig forced = initial_config(p, SurfaceMode::Star);
  forced.kappa_r = {1, 2, 3, 0};
  StepOverrides o;
  o.surface = forced;
  o.spectrum = std::vector<int>{1};
  env.step(identity_action(env.catalog(), {0}, {1}), o);
  CHECK(env.surface() == forced);
  CHECK(env.allocation().spectrum.vue_of_pair(0) == 1);
}

TEST_CASE("silent pair when no channel is chosen") {
  const SimParams p = small();
  V2xEnv env(p, drop_scenario(p, 5));
  env.reset(4);
  env.step(identity_action(env.catalog(), {p.n_vues}, {3}));
  CHECK(env.allocation().p_v2v[0] == 0.0);
}
