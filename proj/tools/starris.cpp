// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: training, evaluation, benchmarks and the JSON probes
// used for golden-file checks.

#include "starris/harness/json_io.hpp"
#include "starris/harness/oracle.hpp"
#include "starris/harness/report.hpp"
#include "starris/harness/runner.hpp"
#include "starris/nn/gradcheck.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

using namespace starris;
namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputRootVar = "STARRIS_OUTPUT_ROOT";

struct Common {
  std::string profile = "desk";
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::uint64_t> seeds{1};
  std::string output_root;
  int beamform_every = 0;

  SimParams params() const {
    SimParams p;
    if (profile == "desk") {
      p = desk_profile();
    } else if (profile == "tiny") {
      p = tiny_profile();
    } else if (profile == "default") {
      p = default_params();
    } else {
      throw ConfigError("unknown profile '" + profile + "' (default, desk, tiny)");
    }
    if (!config_file.empty()) p = load_config_file(config_file, p);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_param(p, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (beamform_every > 0) p.beamform_every = beamform_every;
    p.validate();
    return p;
  }

  std::uint64_t seed() const { return seeds.empty() ? 1 : seeds.front(); }

  std::string root() const {
    if (!output_root.empty()) return output_root;
    if (const char* env = std::getenv(kOutputRootVar); env && *env) return env;
    return "runs";
  }
};

void add_common(CLI::App* app, Common& c, bool with_output = false) {
  app->add_option("--profile", c.profile, "Base parameter set: default, desk or tiny")->capture_default_str();
  app->add_option("--config", c.config_file, "key = value config file applied on top of the profile");
  app->add_option("--set", c.sets, "Override one parameter, key=value (repeatable)");
  app->add_option("--seed", c.seeds, "Seed(s); every random draw derives from these")->capture_default_str();
  if (with_output) {
    app->add_option("--out", c.output_root, std::string("Output root (default $") + kOutputRootVar + " or ./runs)");
    app->add_option("--beamform-every", c.beamform_every, "Re-solve the beams every k steps (MRT in between)");
  }
}

void print_json(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_text_file(path, j.dump(2) + "\n");
  }
}

Json read_json_file(const std::string& path) {
  const std::string text = path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

EpisodeCallback progress(int every) {
  return [every](const EpisodeRecord& r) {
    if (every <= 0 || r.episode % every != 0) return;
    std::fprintf(stderr, "%s seed %llu ep %4d  rate %.4g bit/s  p_lat %.2f  return %.3f  steps %d\n",
                 to_string(r.scheme).c_str(), static_cast<unsigned long long>(r.seed), r.episode, r.sum_rate,
                 r.p_latency, r.reward, r.steps);
  };
}

void print_summary(const Json& summary) {
  for (const auto& [scheme, s] : summary["schemes"].items()) {
    const Json& rate = s["sum_rate"];
    std::printf("%-14s sum_rate %.5g [%.5g, %.5g]  p_latency %.3f  reward %.4g  (n=%d)\n", scheme.c_str(),
                rate["mean"].get<double>(), rate["ci95_low"].get<double>(), rate["ci95_high"].get<double>(),
                s["p_latency"]["mean"].get<double>(), s["reward"]["mean"].get<double>(), rate["n"].get<int>());
  }
}

std::vector<EpisodeRecord> flatten_runs(const std::vector<SeedRun>& runs) {
  std::vector<EpisodeRecord> out;
  for (const auto& r : runs) out.insert(out.end(), r.episodes.begin(), r.episodes.end());
  return out;
}

ExperimentManifest build_manifest(const Common& c, const std::string& scheme, int episodes, int checkpoint_every,
                                  bool randomize_spectrum, const std::string& dir) {
  ExperimentManifest m = make_manifest(scheme_from_string(scheme), c.params(), c.seeds);
  if (episodes >= 0) m.episodes = episodes;
  m.checkpoint_every = checkpoint_every;
  m.randomize_spectrum = randomize_spectrum;
  m.output_dir = dir;
  m.validate();
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STAR-RIS assisted V2X resource allocation lab"};
  app.require_subcommand(1);

  // train
  Common train_c;
  std::string train_scheme = "STAR_PROPOSED", train_name;
  int train_episodes = -1, train_ckpt = 0, train_log = 25;
  bool train_rand_spec = false;
  auto* train = app.add_subcommand("train", "Train one scheme over the given seeds");
  add_common(train, train_c, true);
  train->add_option("--scheme", train_scheme, "STAR_PROPOSED, STAR_RANDOM, RIS_PROPOSED, RIS_RANDOM, DDQN_VANILLA, MAB")
      ->capture_default_str();
  train->add_option("--episodes", train_episodes, "Episode budget (default: the profile's)");
  train->add_option("--checkpoint-every", train_ckpt, "Checkpoint every k episodes (0 = never)");
  train->add_option("--name", train_name, "Run directory name under the output root (default: scheme)");
  train->add_option("--log-every", train_log, "Progress line every k episodes (0 = quiet)");
  train->add_flag("--randomize-spectrum", train_rand_spec, "Random schemes also redraw the spectrum choice");

  // eval
  Common eval_c;
  std::string eval_scheme = "STAR_PROPOSED", eval_ckpt;
  int eval_draws = 50;
  bool eval_oracle = false;
  auto* eval = app.add_subcommand("eval", "Greedy rollouts of a checkpoint on held-out episode seeds");
  add_common(eval, eval_c);
  eval->add_option("--scheme", eval_scheme)->capture_default_str();
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint stem (path without .bin/.json)")->required();
  eval->add_option("--draws", eval_draws, "Held-out episodes")->capture_default_str();
  eval->add_flag("--oracle", eval_oracle, "Also compare the first greedy action against the brute-force optimum");

  // benchmark
  Common bench_c;
  std::vector<std::string> bench_schemes;
  std::string bench_name = "benchmark";
  int bench_episodes = -1, bench_log = 0;
  bool bench_rand_spec = false;
  auto* bench = app.add_subcommand("benchmark", "Train several schemes on the same drops and aggregate");
  add_common(bench, bench_c, true);
  bench->add_option("--schemes", bench_schemes, "Schemes to compare (default: all)");
  bench->add_option("--episodes", bench_episodes, "Episode budget (default: the profile's)");
  bench->add_option("--name", bench_name, "Run directory name under the output root")->capture_default_str();
  bench->add_option("--log-every", bench_log, "Progress line every k episodes (0 = quiet)");
  bench->add_flag("--randomize-spectrum", bench_rand_spec, "Random schemes also redraw the spectrum choice");

  // bruteforce
  Common bf_c;
  bf_c.profile = "tiny";
  std::string bf_out;
  double bf_limit = 1e6;
  auto* bf = app.add_subcommand("bruteforce", "Exhaustive one-step optimum on a frozen channel draw");
  add_common(bf, bf_c);
  bf->add_option("--limit", bf_limit, "Largest catalog to enumerate")->capture_default_str();
  bf->add_option("-o,--output", bf_out, "Write JSON here instead of stdout");

  // gradcheck
  int gc_seeds = 20;
  double gc_tol = 1e-4;
  auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of every network variant");
  gc->add_option("--seeds", gc_seeds, "Random seeds per variant")->capture_default_str();
  gc->add_option("--tol", gc_tol, "Relative error tolerance")->capture_default_str();

  // scenario dump
  Common sc_c;
  std::string sc_out;
  auto* scenario = app.add_subcommand("scenario", "Vehicle drop inspection");
  scenario->require_subcommand(1);
  auto* sc_dump = scenario->add_subcommand("dump", "Print the drop (positions, roles, pairings) as JSON");
  add_common(sc_dump, sc_c);
  sc_dump->add_option("-o,--output", sc_out);

  // channel probe
  Common ch_c;
  std::string ch_out;
  std::uint64_t ch_block = 0;
  auto* channel = app.add_subcommand("channel", "Channel inspection");
  channel->require_subcommand(1);
  auto* ch_probe = channel->add_subcommand("probe", "Print one channel draw as JSON");
  add_common(ch_probe, ch_c);
  ch_probe->add_option("--block", ch_block, "Fading block index")->capture_default_str();
  ch_probe->add_option("-o,--output", ch_out);

  // metrics eval
  Common me_c;
  std::string me_in, me_out;
  auto* metrics = app.add_subcommand("metrics", "Link metric evaluation");
  metrics->require_subcommand(1);
  auto* me_eval = metrics->add_subcommand("eval", "Read {channels, allocation}, print the link report");
  add_common(me_eval, me_c);
  me_eval->add_option("-i,--input", me_in, "JSON file, '-' for stdin")->required();
  me_eval->add_option("-o,--output", me_out);

  // beamform solve
  Common bs_c;
  std::string bs_in, bs_out;
  bool bs_oracle = false;
  auto* beamform = app.add_subcommand("beamform", "V2I beamformer");
  beamform->require_subcommand(1);
  auto* bs_solve = beamform->add_subcommand("solve", "Solve a problem JSON (or one built from --seed)");
  add_common(bs_solve, bs_c);
  bs_solve->add_option("-i,--input", bs_in, "Problem JSON, '-' for stdin");
  bs_solve->add_option("-o,--output", bs_out);
  bs_solve->add_flag("--oracle", bs_oracle, "Also run the grid oracle (one VUE, one antenna)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const std::string dir = (fs::path(train_c.root()) / (train_name.empty() ? train_scheme : train_name)).string();
      const ExperimentManifest m = build_manifest(train_c, train_scheme, train_episodes, train_ckpt, train_rand_spec, dir);
      const auto runs = run_manifest(m, progress(train_log));
      print_summary(summary_json(flatten_runs(runs)));
      std::printf("outputs in %s\n", dir.c_str());
    } else if (*eval) {
      ExperimentManifest m = build_manifest(eval_c, eval_scheme, -1, 0, false, {});
      Runner runner(m, eval_c.seed());
      runner.load_checkpoint(eval_ckpt);
      Json out;
      std::vector<double> rates, lat, ret;
      for (int k = 0; k < eval_draws; ++k) {
        const EpisodeRecord r = runner.evaluate_episode(Runner::heldout_episode_seed(eval_c.seed(), k));
        rates.push_back(r.sum_rate);
        lat.push_back(r.p_latency);
        ret.push_back(r.reward);
      }
      auto iv = [](const Interval& ci) { return Json{{"mean", ci.mean}, {"ci95_low", ci.lower()}, {"ci95_high", ci.upper()}}; };
      out["scheme"] = eval_scheme;
      out["draws"] = eval_draws;
      out["sum_rate"] = iv(confidence_interval_95(rates));
      out["p_latency"] = iv(confidence_interval_95(lat));
      out["reward"] = iv(confidence_interval_95(ret));
      if (eval_oracle) {
        const OracleGap g = greedy_vs_oracle(runner, eval_draws);
        out["oracle"] = {{"policy_mean", g.policy_mean}, {"oracle_mean", g.oracle_mean}, {"ratio", g.ratio()}};
      }
      print_json(out, "");
    } else if (*bench) {
      if (bench_schemes.empty())
        for (Scheme s : all_schemes()) bench_schemes.push_back(to_string(s));
      const fs::path dir = fs::path(bench_c.root()) / bench_name;
      std::vector<EpisodeRecord> all;
      for (const auto& s : bench_schemes) {
        const ExperimentManifest m =
            build_manifest(bench_c, s, bench_episodes, 0, bench_rand_spec, (dir / s).string());
        std::fprintf(stderr, "%s ...\n", s.c_str());
        const auto recs = flatten_runs(run_manifest(m, progress(bench_log)));
        all.insert(all.end(), recs.begin(), recs.end());
      }
      const Json summary = summary_json(all);
      write_text_file((dir / "metrics.csv").string(), metrics_csv(all));
      write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
      write_text_file((dir / "cdf.csv").string(), cdf_csv(all));
      print_summary(summary);
      std::printf("outputs in %s\n", dir.string().c_str());
    } else if (*bf) {
      const SimParams p = bf_c.params();
      V2xEnv env(p, drop_scenario(p, bf_c.seed()));
      env.reset(bf_c.seed());
      const OracleResult o = brute_force_oracle(env, solver_options(p), bf_limit);
      print_json({{"seed", bf_c.seed()},
                  {"catalog_size", env.catalog().joint_cardinality()},
                  {"action", o.action},
                  {"value", o.value},
                  {"ties", o.ties},
                  {"evaluated", o.evaluated},
                  {"distinct_configurations", o.solves}},
                 bf_out);
    } else if (*gc) {
      bool ok = true;
      for (nn::Trunk trunk : {nn::Trunk::Linear, nn::Trunk::Residual, nn::Trunk::Attention}) {
        nn::NetworkSpec spec;
        spec.trunk = trunk;
        spec.n_tokens = 3;
        spec.token_width = 4;
        spec.embed_width = 4;
        spec.heads = 2;
        spec.fusion_width = 5;
        spec.head_sizes = {2, 3};
        double worst = 0.0;
        for (int s = 0; s < gc_seeds; ++s)
          worst = std::max(worst, nn::gradcheck_network(spec, static_cast<std::uint64_t>(s)).max_rel_error);
        const bool pass = worst <= gc_tol;
        ok = ok && pass;
        std::printf("%-10s max rel error %.3e over %d seeds  %s\n", nn::to_string(trunk).c_str(), worst, gc_seeds,
                    pass ? "ok" : "FAIL");
      }
      return ok ? 0 : 1;
    } else if (*sc_dump) {
      print_json(scenario_to_json(drop_scenario(sc_c.params(), sc_c.seed())), sc_out);
    } else if (*ch_probe) {
      const SimParams p = ch_c.params();
      const Scenario scn = drop_scenario(p, ch_c.seed());
      print_json(channels_to_json(draw_channels(scn, p, ch_c.seed(), ch_block)), ch_out);
    } else if (*me_eval) {
      const Json in = read_json_file(me_in);
      SimParams p = me_c.params();
      if (in.contains("params")) p = params_from_json(in["params"], p);
      const ChannelSet cs = channels_from_json(in.at("channels"));
      const AllocationState a = allocation_from_json(in.at("allocation"), cs.n_vues());
      const LinkReport rep = evaluate(cs, a, p);
      const RewardTerms t = reward_terms(rep, p);
      Json out = report_to_json(rep);
      out["reward"] = t.total();
      out["reward_terms"] = {{"throughput", t.throughput}, {"qos", t.qos}, {"latency", t.latency}, {"outage", t.outage}};
      print_json(out, me_out);
    } else if (*bs_solve) {
      const SimParams p = bs_c.params();
      BeamformingProblem prob;
      if (!bs_in.empty()) {
        prob = problem_from_json(read_json_file(bs_in));
      } else {
        V2xEnv env(p, drop_scenario(p, bs_c.seed()));
        env.reset(bs_c.seed());
        std::vector<int> spectrum(p.n_v2v_pairs), power(p.n_v2v_pairs, p.power_levels - 1);
        for (int v = 0; v < p.n_v2v_pairs; ++v) spectrum[v] = v % p.n_vues;
        env.apply_action(identity_action(env.catalog(), spectrum, power));
        prob = make_problem(env.channels(), env.staged_channels(), env.allocation(), p);
      }
      Json out;
      out["problem"] = problem_to_json(prob);
      out["solution"] = solution_to_json(sca_solve(prob, nullptr, solver_options(p)));
      if (bs_oracle) {
        const GridOracleResult g = grid_oracle(prob);
        out["oracle"] = {{"sum_rate", g.sum_rate}, {"p", complex_to_json(g.p)}, {"feasible_points", g.feasible_points}};
      }
      print_json(out, bs_out);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
