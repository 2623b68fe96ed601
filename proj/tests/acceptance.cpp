// Acceptance run: one pass/fail line per criterion. With no arguments every
// criterion runs; otherwise only the listed numbers.

#include "beamformer_cases.hpp"
#include "chain_mdp.hpp"

#include "starris/harness/oracle.hpp"
#include "starris/harness/report.hpp"
#include "starris/harness/runner.hpp"
#include "starris/nn/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>

using namespace starris;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void note(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

nn::Tensor random_tensor(std::vector<int> shape, Rng& rng) {
  nn::Tensor t(std::move(shape));
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& v : t.values()) v = n(rng);
  return t;
}

// ---------------------------------------------------------------- 1

Outcome gradients() {
  using nn::Graph;
  using Ids = std::vector<Graph::Id>;
  struct Layer {
    const char* name;
    std::function<std::vector<nn::Tensor>(Rng&)> inputs;
    std::function<Graph::Id(Graph&, const Ids&)> body;
  };
  auto dense = [](Graph& g, Graph::Id x, Graph::Id w, Graph::Id b) { return g.add_bias(g.matmul(x, w), b); };
  const std::vector<Layer> layers{
      {"dense", [](Rng& r) { return std::vector{random_tensor({3, 4}, r), random_tensor({4, 2}, r), random_tensor({2}, r)}; },
       [&](Graph& g, const Ids& x) { return dense(g, x[0], x[1], x[2]); }},
      {"layernorm", [](Rng& r) { return std::vector{random_tensor({3, 5}, r), random_tensor({5}, r), random_tensor({5}, r)}; },
       [](Graph& g, const Ids& x) { return g.layer_norm(x[0], x[1], x[2]); }},
      {"swish", [](Rng& r) { return std::vector{random_tensor({2, 5}, r)}; },
       [](Graph& g, const Ids& x) { return g.swish(x[0]); }},
      {"residual",
       [](Rng& r) {
         return std::vector{random_tensor({3, 4}, r), random_tensor({4, 4}, r), random_tensor({4}, r), random_tensor({4}, r),
                            random_tensor({4}, r),    random_tensor({4, 4}, r), random_tensor({4}, r)};
       },
       [&](Graph& g, const Ids& x) {
         const auto y = g.swish(g.layer_norm(dense(g, x[0], x[1], x[2]), x[3], x[4]));
         return g.add(x[0], dense(g, y, x[5], x[6]));
       }},
      {"attention", [](Rng& r) { return std::vector{random_tensor({6, 4}, r), random_tensor({6, 4}, r), random_tensor({6, 4}, r)}; },
       [](Graph& g, const Ids& x) { return g.attention(x[0], x[1], x[2], 2, 3, 1); }},
      {"mha",
       [](Rng& r) {
         return std::vector{random_tensor({6, 4}, r), random_tensor({4, 4}, r), random_tensor({4, 4}, r), random_tensor({4, 4}, r),
                            random_tensor({4, 4}, r)};
       },
       [](Graph& g, const Ids& x) {
         const auto att = g.attention(g.matmul(x[0], x[1]), g.matmul(x[0], x[2]), g.matmul(x[0], x[3]), 2, 3, 2);
         return g.matmul(att, x[4]);
       }},
  };

  bool ok = true;
  std::vector<std::string> parts;
  for (const auto& layer : layers) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(derive_seed(seed, 0x9c));
      auto inputs = layer.inputs(rng);
      const nn::LossBuilder build = [&, seed](Graph& g, const Ids& x) {
        const auto y = layer.body(g, x);
        const int n = static_cast<int>(g.value(y).size());
        Rng wr(derive_seed(seed, 0x77));
        const auto w = g.constant(random_tensor({n, 1}, wr));
        return g.matmul(g.reshape(y, {1, n}), w);
      };
      worst = std::max(worst, nn::gradcheck(build, inputs).max_rel_error);
    }
    ok = ok && worst <= 1e-4;
    parts.push_back(fmt("%s %.1e", layer.name, worst));
  }
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(derive_seed(seed, 0x45e));
      auto pred = random_tensor({3, 4}, rng);
      const auto target = random_tensor({3, 2}, rng);
      const nn::LossBuilder build = [&](Graph& g, const Ids& x) {
        return g.mse(g.gather_cols(x[0], {0, 3, 1, 1, 2, 0}, 2), target);
      };
      worst = std::max(worst, nn::gradcheck(build, {pred}).max_rel_error);
    }
    ok = ok && worst <= 1e-4;
    parts.push_back(fmt("mse %.1e", worst));
  }
  for (nn::Trunk trunk : {nn::Trunk::Linear, nn::Trunk::Residual, nn::Trunk::Attention}) {
    nn::NetworkSpec spec;
    spec.trunk = trunk;
    spec.n_tokens = 3;
    spec.token_width = 4;
    spec.embed_width = 4;
    spec.heads = 2;
    spec.fusion_width = 5;
    spec.head_sizes = {3, 2};
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) worst = std::max(worst, nn::gradcheck_network(spec, seed).max_rel_error);
    ok = ok && worst <= 1e-4;
    parts.push_back(fmt("net:%s %.1e", nn::to_string(trunk).c_str(), worst));
  }
  std::string detail = "max rel error over 20 seeds:";
  for (const auto& p : parts) detail += " " + p + ";";
  detail += " limit 1e-4";
  return {ok, detail};
}

// ---------------------------------------------------------------- 2

Outcome physics_fuzz() {
  const SimParams p = desk_profile();
  long violations = 0, steps = 0;
  for (SurfaceMode mode : {SurfaceMode::Star, SurfaceMode::ReflectOnly}) {
    V2xEnv env(p, drop_scenario(p, mode == SurfaceMode::Star ? 101 : 102), mode);
    Rng rng(mode == SurfaceMode::Star ? 7 : 8);
    std::uint64_t episode = 0;
    env.reset(derive_seed(55, episode));
    const long budget = 50000;
    for (long k = 0; k < budget; ++k) {
      std::vector<int> flat;
      for (int b : env.catalog().branch_sizes) flat.push_back(std::uniform_int_distribution<int>(0, b - 1)(rng));
      StepOverrides ov;
      const int coin = std::uniform_int_distribution<int>(0, 3)(rng);
      if (coin == 0) ov.surface = random_surface_config(p, mode, rng);
      if (coin == 1) {
        std::vector<int> req(p.n_v2v_pairs);
        for (int& r : req) r = std::uniform_int_distribution<int>(0, p.n_vues)(rng);
        ov.spectrum = req;
      }
      env.step(unflatten(flat, env.catalog()), ov);
      ++steps;

      const AllocationState& a = env.allocation();
      bool bad = energy_split_error(a.ris) >= 1e-12 || !on_grid(a.ris);
      if (mode == SurfaceMode::ReflectOnly)
        for (double b : a.ris.beta_t) bad = bad || b != 0.0;
      const auto m = a.spectrum.matrix();
      for (int i = 0; i < p.n_vues; ++i) {
        int row = 0;
        for (int v = 0; v < p.n_v2v_pairs; ++v) row += m[i][v];
        bad = bad || row > 1;
      }
      for (int v = 0; v < p.n_v2v_pairs; ++v) {
        int col = 0;
        for (int i = 0; i < p.n_vues; ++i) col += m[i][v];
        bad = bad || col > 1 || !on_power_grid(a.p_v2v[v], p);
      }
      violations += bad;
      if (env.done()) env.reset(derive_seed(55, ++episode));
    }
  }
  return {violations == 0 && steps >= 100000,
          fmt("%ld random steps (STAR and reflect-only), %ld invariant violations", steps, violations)};
}

// ---------------------------------------------------------------- 3

Outcome channel_statistics() {
  SimParams p = default_params();
  const int draws = 100000;
  double worst = 0.0;
  std::vector<std::string> parts;
  for (double d : {12.0, 60.0}) {
    const double expect_ray = p.ref_gain() * std::pow(d, -p.pathloss_exp);
    Rng rng(derive_seed(31, static_cast<std::uint64_t>(d)));
    double acc = 0.0;
    for (int k = 0; k < draws; ++k) acc += std::norm(rayleigh_link(d, 1, p, rng)[0]);
    const double err = std::abs(acc / draws / expect_ray - 1.0);
    worst = std::max(worst, err);
    parts.push_back(fmt("rayleigh d=%g %.2f%%", d, 100 * err));
    for (double k_factor : {0.0, 10.0, 1e9}) {
      p.rician_k = k_factor;
      const double expect = p.ref_gain() * std::pow(d, -p.surface_pathloss_exp);
      const CVector los = steering_vector(4, 0.3, p.element_spacing_wl);
      double sum = 0.0;
      for (int k = 0; k < draws; ++k) sum += std::norm(rician_link(d, los, p, rng)[k % 4]);
      const double e = std::abs(sum / draws / expect - 1.0);
      worst = std::max(worst, e);
      parts.push_back(fmt("rician K=%g d=%g %.2f%%", k_factor, d, 100 * e));
    }
  }
  std::string detail = fmt("worst relative mean-power error %.2f%% (limit 3%%) over %d draws each:", 100 * worst, draws);
  for (const auto& s : parts) detail += " " + s + ";";
  return {worst < 0.03, detail};
}

// ---------------------------------------------------------------- 4

Outcome beamformer_optimality() {
  using namespace bf_cases;
  Rng rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double mf_worst = 0.0;
  int skipped = 0;
  for (int b : {1, 2}) {
    for (int trial = 0; trial < 25; ++trial) {
      auto prob = unshared({random_channel(b, 0.3 + 3.0 * u(rng), rng)});
      prob.p_max_w = 0.2 + 5.0 * u(rng);
      prob.noise_w = 0.3 + u(rng);
      const auto sol = sca_solve(prob);
      const double expect = prob.bandwidth * std::log2(1.0 + prob.p_max_w * prob.h[0].squaredNorm() / prob.noise_w);
      mf_worst = std::max(mf_worst, sol.status == SolveStatus::Infeasible ? 1.0 : std::abs(sol.sum_rate / expect - 1.0));
    }
    for (int trial = 0; trial < 15; ++trial) {
      std::vector<CVector> h;
      for (int i = 0; i < 3; ++i) h.push_back(random_channel(b, 0.3 + 3.0 * u(rng), rng));
      auto prob = unshared(h);
      prob.interference = {0.5 * u(rng), 0.0, 2.0 * u(rng)};
      prob.p_max_w = 1.0 + 4.0 * u(rng);
      // keep only instances where every SINR floor can be met at once
      double floor_share = 0.0;
      for (int i = 0; i < 3; ++i)
        floor_share += prob.mu_floor * (prob.interference[i] + prob.noise_w) / (prob.p_max_w * prob.h[i].squaredNorm());
      if (floor_share >= 1.0) {
        ++skipped;
        continue;
      }
      const auto sol = sca_solve(prob);
      mf_worst = std::max(mf_worst, sol.status == SolveStatus::Infeasible
                                        ? 1.0
                                        : std::abs(sol.sum_rate / water_filling_rate(prob) - 1.0));
    }
  }
  note(fmt("matched-filter / water-filling instances: worst relative gap %.2e (limit 1e-5), %d floor-infeasible draws skipped", mf_worst, skipped));

  double grid_worst = 0.0;
  int compared = 0, mismatched_status = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto base = unshared({random_channel(1, 0.5 + 2.0 * u(rng), rng)});
    base.p_max_w = 0.5 + 2.0 * u(rng);
    const auto sense = trial % 2 ? OutageSense::Lower : OutageSense::Upper;
    const auto prob = shared(base, 0.5 + 4.0 * u(rng), sense);
    // one antenna: only |p| matters, so spend the grid on magnitudes
    const auto grid = grid_oracle(prob, 20000, 4);
    const auto sol = sca_solve(prob);
    if (grid.feasible_points == 0) {
      mismatched_status += sol.status != SolveStatus::Infeasible;
      continue;
    }
    ++compared;
    if (sol.status == SolveStatus::Infeasible) {
      ++mismatched_status;
      continue;
    }
    grid_worst = std::max(grid_worst, std::abs(sol.sum_rate / grid.sum_rate - 1.0));
  }
  note(fmt("grid-oracle micro instances: %d compared, worst relative gap %.3f%% (limit 0.5%%), %d status mismatches",
           compared, 100 * grid_worst, mismatched_status));

  int feasible = 0, attempts = 0, non_monotone = 0, infeasible_iterates = 0;
  while (feasible < 100 && attempts < 2000) {
    ++attempts;
    std::vector<CVector> h;
    for (int i = 0; i < 4; ++i) h.push_back(random_channel(2, 0.3 + 3.0 * u(rng), rng));
    auto prob = unshared(h);
    prob.p_max_w = 1.0 + 4.0 * u(rng);
    prob.mu_floor = 0.02;
    prob.outage_sense = attempts % 2 ? OutageSense::Lower : OutageSense::Upper;
    prob.interference_path = attempts % 4 < 2 ? V2vInterferencePath::BsChannel : V2vInterferencePath::ReceiverChannel;
    prob.spectrum = SpectrumAllocation(4, {1, 3});
    prob.v2v_signal = {0.5 + 3.0 * u(rng), 0.5 + 3.0 * u(rng)};
    prob.v2v_rx_gain = {2.0 * u(rng), 2.0 * u(rng)};
    prob.interference = {0.0, 0.4, 0.0, 0.8};
    const auto sol = sca_solve(prob);
    if (sol.status == SolveStatus::Infeasible) continue;
    ++feasible;
    non_monotone += !non_decreasing(sol.trace);
    infeasible_iterates += max_violation(prob, sol.p) > 1e-7;
  }
  note(fmt("random feasible instances: %d (from %d draws), %d non-monotone traces, %d final points infeasible", feasible,
           attempts, non_monotone, infeasible_iterates));

  const bool ok = mf_worst <= 1e-5 && compared >= 20 && grid_worst <= 0.005 && mismatched_status == 0 &&
                  feasible == 100 && non_monotone == 0 && infeasible_iterates == 0;
  return {ok, fmt("closed form gap %.1e, grid gap %.3f%% on %d instances, %d/100 monotone traces", mf_worst,
                  100 * grid_worst, compared, feasible - non_monotone)};
}

// ---------------------------------------------------------------- 5

Outcome chain_mdp() {
  const auto q = chain::optimal_q();
  std::vector<int> optimal;
  for (int s = 0; s < chain::kStates; ++s) optimal.push_back(q[s][1] > q[s][0] ? 1 : 0);
  int runs = 0, matched = 0;
  std::string misses;
  for (nn::Trunk trunk : {nn::Trunk::Attention, nn::Trunk::Residual}) {
    for (TargetRule rule : {TargetRule::Ddqn, TargetRule::Dqn}) {
      int ok = 0;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ++runs;
        const auto agent = chain::train(trunk, rule, seed);
        if (chain::greedy_policy(agent) == optimal) {
          ++ok;
        } else {
          misses += fmt(" %s/%s/seed%llu", nn::to_string(trunk).c_str(), rule == TargetRule::Ddqn ? "ddqn" : "dqn",
                        static_cast<unsigned long long>(seed));
        }
      }
      matched += ok;
      note(fmt("%s trunk, %s target: %d/5 seeds recover the optimal policy", nn::to_string(trunk).c_str(),
               rule == TargetRule::Ddqn ? "double" : "single", ok));
    }
  }
  return {matched == runs, fmt("%d/%d runs match value iteration%s", matched, runs, misses.empty() ? "" : (";" + misses).c_str())};
}

// ---------------------------------------------------------------- 6

Outcome oracle_quality() {
  const SimParams p = tiny_profile();
  {
    V2xEnv env(p, drop_scenario(p, 42));
    env.reset(42);
    const OracleResult o = brute_force_oracle(env, solver_options(p));
    note(fmt("frozen seed-42 instance: catalog %.0f actions, oracle value %.10g (recorded 6.301245411)",
             env.catalog().joint_cardinality(), o.value));
  }
  ExperimentManifest m = make_manifest(Scheme::StarProposed, p, {42});
  m.episodes = 300;
  Runner runner(m, 42);
  for (int ep = 0; ep < m.episodes; ++ep) runner.run_episode(ep);
  const OracleGap g = greedy_vs_oracle(runner, 50);
  int within = 0;
  for (std::size_t k = 0; k < g.policy.size(); ++k) within += g.policy[k] >= g.oracle[k] - 1e-9 * std::abs(g.oracle[k]);
  note(fmt("greedy action optimal on %d/50 held-out draws", within));
  const bool ok = g.oracle_mean > 0.0 && g.ratio() >= 0.9;
  return {ok, fmt("mean greedy one-step reward %.4f vs oracle %.4f: %.1f%% (need >= 90%%)", g.policy_mean, g.oracle_mean,
                  100 * g.ratio())};
}

// ---------------------------------------------------------------- 7/8 helpers

struct SchemeRun {
  std::vector<double> final_rate;      // per seed
  std::vector<double> final_latency;   // per seed
  std::vector<std::vector<double>> rewards;  // per seed, per episode
  std::vector<double> tail_step_rates;  // pooled per-step sum rates of the final window
};

constexpr int kFinalWindow = 100;

SchemeRun run_scheme(Scheme scheme, const SimParams& params, const std::vector<std::uint64_t>& seeds, const std::string& tag) {
  SchemeRun out;
  const ExperimentManifest m = make_manifest(scheme, params, seeds);
  for (std::uint64_t seed : seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    const SeedRun run = run_seed(m, seed);
    std::vector<double> rate, lat, rew;
    for (const auto& e : run.episodes) {
      rate.push_back(e.sum_rate);
      lat.push_back(e.p_latency);
      rew.push_back(e.reward);
    }
    const std::size_t first = run.episodes.size() > kFinalWindow ? run.episodes.size() - kFinalWindow : 0;
    for (std::size_t k = first; k < run.episodes.size(); ++k)
      out.tail_step_rates.insert(out.tail_step_rates.end(), run.episodes[k].step_sum_rates.begin(),
                                 run.episodes[k].step_sum_rates.end());
    out.final_rate.push_back(tail_mean(rate, kFinalWindow));
    out.final_latency.push_back(tail_mean(lat, kFinalWindow));
    out.rewards.push_back(rew);
    note(fmt("%-13s %s seed %llu: final-%d sum rate %.5g bit/s, p_latency %.3f, return %.3f (%.0f s)", to_string(scheme).c_str(),
             tag.c_str(), static_cast<unsigned long long>(seed), kFinalWindow, out.final_rate.back(),
             out.final_latency.back(), tail_mean(rew, kFinalWindow), seconds_since(t0)));
  }
  return out;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

// ---------------------------------------------------------------- 7

Outcome scheme_ordering() {
  const SimParams p = desk_profile();
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::map<Scheme, SchemeRun> runs;
  for (Scheme s : all_schemes()) runs[s] = run_scheme(s, p, seeds, "desk");

  bool ok = true;
  std::string detail;
  const std::vector<std::pair<Scheme, Scheme>> gaps{{Scheme::StarProposed, Scheme::RisProposed},
                                                    {Scheme::RisProposed, Scheme::StarRandom},
                                                    {Scheme::StarRandom, Scheme::RisRandom},
                                                    {Scheme::StarProposed, Scheme::DdqnVanilla},
                                                    {Scheme::DdqnVanilla, Scheme::Mab}};
  for (const auto& [hi, lo] : gaps) {
    std::vector<double> diff;
    for (std::size_t k = 0; k < seeds.size(); ++k) diff.push_back(runs[hi].final_rate[k] - runs[lo].final_rate[k]);
    const Interval ci = confidence_interval_95(diff);
    const bool sig = ci.lower() > 0.0;
    ok = ok && sig;
    note(fmt("%s - %s: paired mean %.4g bit/s, 95%% CI [%.4g, %.4g] %s", to_string(hi).c_str(), to_string(lo).c_str(),
             ci.mean, ci.lower(), ci.upper(), sig ? "significant" : "NOT significant"));
    detail += fmt("%s>%s %s; ", to_string(hi).c_str(), to_string(lo).c_str(), sig ? "ok" : "no");
  }
  int faster = 0;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const int a = episodes_to_fraction(runs[Scheme::StarProposed].rewards[k]);
    const int v = episodes_to_fraction(runs[Scheme::DdqnVanilla].rewards[k]);
    faster += a >= 0 && (v < 0 || a < v);
    note(fmt("seed %llu: episodes to 95%% of final reward, attention %d, residual-only %d",
             static_cast<unsigned long long>(seeds[k]), a, v));
  }
  ok = ok && faster >= 4;
  detail += fmt("attention faster on %d/5 seeds (need 4)", faster);
  return {ok, detail};
}

// ---------------------------------------------------------------- 8

Outcome monotonicity() {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int violations = 0, points = 0;
  std::string detail;

  std::vector<double> rate_v, lat_v;
  for (int v : {1, 2, 3}) {
    SimParams p = desk_profile();
    p.n_v2v_pairs = v;
    const SchemeRun r = run_scheme(Scheme::StarProposed, p, seeds, fmt("V=%d", v));
    rate_v.push_back(mean_of(r.final_rate));
    lat_v.push_back(mean_of(r.final_latency));
  }
  for (std::size_t k = 1; k < rate_v.size(); ++k) {
    points += 2;
    violations += rate_v[k] > rate_v[k - 1];
    violations += lat_v[k] > lat_v[k - 1];
  }
  note(fmt("sum rate vs V=1,2,3: %.5g %.5g %.5g; p_latency: %.3f %.3f %.3f", rate_v[0], rate_v[1], rate_v[2], lat_v[0],
           lat_v[1], lat_v[2]));
  detail += fmt("rate(V) %.4g/%.4g/%.4g, p_lat(V) %.3f/%.3f/%.3f; ", rate_v[0], rate_v[1], rate_v[2], lat_v[0], lat_v[1],
                lat_v[2]);

  std::vector<double> rate_g;
  const std::vector<double> thresholds{0.0, 4.0, 8.0};
  for (double g0 : thresholds) {
    SimParams p = desk_profile();
    p.outage_threshold_db = g0;
    const SchemeRun r = run_scheme(Scheme::StarProposed, p, seeds, fmt("gamma0=%gdB", g0));
    rate_g.push_back(mean_of(r.final_rate));
  }
  for (std::size_t k = 1; k < rate_g.size(); ++k) {
    ++points;
    violations += rate_g[k] > rate_g[k - 1];
  }
  note(fmt("sum rate vs outage threshold 0/4/8 dB: %.5g %.5g %.5g", rate_g[0], rate_g[1], rate_g[2]));
  detail += fmt("rate(gamma0) %.4g/%.4g/%.4g; ", rate_g[0], rate_g[1], rate_g[2]);

  std::map<int, std::vector<double>> samples;
  for (int n : {8, 16}) {
    SimParams p = desk_profile();
    p.n_elements = n;
    p.p_i_max_db = 0.0;
    samples[n] = run_scheme(Scheme::StarProposed, p, seeds, fmt("N=%d P=0dB", n)).tail_step_rates;
    std::sort(samples[n].begin(), samples[n].end());
  }
  auto quantile = [](const std::vector<double>& xs, double q) {
    return xs[static_cast<std::size_t>(q * static_cast<double>(xs.size() - 1))];
  };
  int cdf_bad = 0;
  std::string deciles;
  for (int d = 1; d <= 9; ++d) {
    const double q8 = quantile(samples[8], d / 10.0), q16 = quantile(samples[16], d / 10.0);
    ++points;
    cdf_bad += q16 < q8;
    deciles += fmt(" %d0%%: %.4g vs %.4g", d, q16, q8);
  }
  violations += cdf_bad;
  note("rate deciles N=16 vs N=8 at 0 dB budget:" + deciles);
  detail += fmt("CDF dominance broken at %d/9 deciles; ", cdf_bad);
  detail += fmt("%d ordering violations over %d grid points (allowed 1)", violations, points);
  return {violations <= 1, detail};
}

// ---------------------------------------------------------------- 9

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "starris_acceptance_det";
  fs::remove_all(root);
  int identical = 0, total = 0;
  for (Scheme s : all_schemes()) {
    ExperimentManifest m = make_manifest(s, desk_profile(), {1, 2});
    m.episodes = 8;
    std::string first;
    for (int run = 0; run < 2; ++run) {
      m.output_dir = (root / (to_string(s) + "_" + std::to_string(run))).string();
      run_manifest(m);
      const std::string csv = read_text_file(m.output_dir + "/metrics.csv");
      if (run == 0) first = csv;
      else identical += csv == first && !csv.empty();
    }
    ++total;
  }
  fs::remove_all(root);
  return {identical == total, fmt("%d/%d schemes produced byte-identical metrics.csv on two runs (2 seeds, 8 episodes)",
                                  identical, total)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "gradient correctness", 60, gradients},
      {2, "physics invariants", 120, physics_fuzz},
      {3, "channel statistics", 60, channel_statistics},
      {4, "beamformer optimality", 300, beamformer_optimality},
      {5, "tabular RL sanity", 120, chain_mdp},
      {6, "oracle-relative policy quality", 900, oracle_quality},
      {7, "scheme ordering", 2700, scheme_ordering},
      {8, "monotonicity trends", 3600, monotonicity},
      {9, "end-to-end determinism", 600, determinism},
  };
  std::vector<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.push_back(std::atoi(argv[k]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    std::printf("criterion %d (%s) ...\n", c.id, c.name);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(t0);
    const bool in_time = t < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d: %s  %s: %s [%.1f s, limit %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), t, c.limit_s, in_time ? "" : ", OVER TIME");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
