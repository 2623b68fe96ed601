// SPDX-License-Identifier: Apache-2.0

#include "starris/harness/runner.hpp"

#include "starris/harness/json_io.hpp"
#include "starris/harness/report.hpp"
#include "starris/nn/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace starris {

StarRisConfig random_surface_config(const SimParams& params, SurfaceMode mode, Rng& rng) {
  StarRisConfig cfg = initial_config(params, mode);
  const int n = cfg.n_elements();
  const int levels = phase_levels(params.phase_bits);
  std::uniform_int_distribution<int> phase(0, levels - 1);
  std::uniform_real_distribution<double> amp(0.0, 1.0);
  const double shared = amp(rng);
  for (int k = 0; k < n; ++k) {
    cfg.kappa_r[k] = phase(rng);
    if (mode == SurfaceMode::ReflectOnly) continue;
    cfg.kappa_t[k] = phase(rng);
    const double b = params.uniform_amplitude ? shared : amp(rng);
    cfg.beta_r[k] = b;
    cfg.beta_t[k] = std::sqrt(1.0 - b * b);
  }
  return cfg;
}

AgentConfig agent_config(const SimParams& params, Scheme scheme) {
  AgentConfig cfg;
  const StateLayout layout = state_layout(params);
  cfg.network.trunk = network_trunk(scheme);
  cfg.network.n_tokens = layout.n_tokens;
  cfg.network.token_width = layout.token_width;
  cfg.network.embed_width = params.embed_width;
  cfg.network.res_blocks = params.res_blocks;
  cfg.network.heads = params.attention_heads;
  cfg.network.fusion_width = params.fusion_width;
  cfg.network.head_sizes = action_space(params).branch_sizes;
  cfg.rule = TargetRule::Ddqn;
  cfg.discount = params.discount;
  cfg.learning_rate = params.learning_rate;
  cfg.batch_size = params.batch_size;
  cfg.target_sync_period = params.target_sync_period;
  cfg.replay_capacity = params.replay_capacity;
  cfg.optimizer = params.optimizer;
  cfg.momentum = params.momentum;
  return cfg;
}

BeamformingSolution solve_beams(const V2xEnv& env, const SolverOptions& opts) {
  const auto prob = make_problem(env.channels(), env.staged_channels(), env.allocation(), env.params());
  return sca_solve(prob, nullptr, opts);
}

std::uint64_t Runner::training_episode_seed(std::uint64_t seed, int episode) {
  return derive_seed(seed, 0xe915ULL, static_cast<std::uint64_t>(episode));
}

std::uint64_t Runner::heldout_episode_seed(std::uint64_t seed, int k) {
  return derive_seed(seed, 0x4e1dULL, static_cast<std::uint64_t>(k));
}

Runner::Runner(const ExperimentManifest& manifest, std::uint64_t seed)
    : manifest_(manifest),
      seed_(seed),
      env_(manifest.params, drop_scenario(manifest.params, seed), surface_mode(manifest.scheme)),
      solver_(solver_options(manifest.params)),
      override_rng_(derive_seed(seed, 0x7a4d0ULL)) {
  manifest_.validate();
  if (uses_bandit(manifest.scheme)) {
    bandit_ = std::make_unique<EpsilonGreedyBandit>(env_.catalog().branch_sizes, derive_seed(seed, 0xba7ULL));
  } else {
    agent_ = std::make_unique<DqnAgent>(agent_config(manifest.params, manifest.scheme), derive_seed(seed, 0xa6e7ULL));
  }
}

double Runner::epsilon(int episode) const {
  const SimParams& p = manifest_.params;
  return epsilon_schedule(episode, manifest_.episodes, p.epsilon_initial, p.epsilon_final, p.epsilon_decay_fraction);
}

StepResult Runner::play(const ActionTuple& action) {
  StepOverrides overrides;
  if (random_surface(manifest_.scheme)) {
    overrides.surface = random_surface_config(manifest_.params, env_.mode(), override_rng_);
    if (manifest_.randomize_spectrum) {
      std::uniform_int_distribution<int> pick(0, manifest_.params.n_vues);
      std::vector<int> req(manifest_.params.n_v2v_pairs);
      for (int& r : req) r = pick(override_rng_);
      overrides.spectrum = req;
    }
  }
  const int step = env_.step_index();
  env_.apply_action(action, overrides);
  if (step % manifest_.params.beamform_every == 0) {
    const BeamformingSolution sol = solve_beams(env_, solver_);
    ++counters_.beamformer_calls;
    if (sol.status == SolveStatus::Infeasible) {
      ++counters_.infeasible;
      ++infeasible_in_episode_;
    }
    env_.set_beamformers(sol.p);
  } else {
    env_.set_beamformers(V2xEnv::equal_power_mrt(env_.staged_channels(), manifest_.params.p_i_max_w()));
  }
  return env_.finish_step();
}

ActionTuple Runner::greedy_action(const std::vector<double>& state) const {
  if (bandit_) return unflatten(bandit_->greedy(), env_.catalog());
  return unflatten(agent_->greedy_action(state), env_.catalog());
}

EpisodeRecord Runner::rollout(std::uint64_t episode_seed, int episode, double eps, bool learn) {
  EpisodeRecord rec;
  rec.episode = episode;
  rec.scheme = manifest_.scheme;
  rec.seed = seed_;
  infeasible_in_episode_ = 0;
  std::vector<double> state = env_.reset(episode_seed);
  int pair_steps = 0, latency_ok = 0, outage_ok = 0;
  while (!env_.done()) {
    std::vector<int> flat;
    if (bandit_) {
      flat = learn ? bandit_->select(eps) : bandit_->greedy();
    } else {
      flat = learn ? agent_->select_action(state, eps) : agent_->greedy_action(state);
    }
    StepResult res = play(unflatten(flat, env_.catalog()));
    rec.reward += res.transition.reward;
    rec.step_sum_rates.push_back(res.report.sum_rate_i());
    pair_steps += static_cast<int>(res.report.rate_v.size());
    latency_ok += res.report.latency_satisfied();
    outage_ok += res.report.outage_satisfied();
    state = res.transition.next_state;
    if (learn) {
      if (bandit_) {
        bandit_->update(flat, res.transition.reward);
      } else {
        agent_->observe(std::move(res.transition));
        const auto need = static_cast<std::size_t>(std::max(agent_->config().batch_size, manifest_.params.warmup_transitions));
        if (agent_->buffer().size() >= need) {
          agent_->train_step();
          ++counters_.train_steps;
        }
      }
    }
  }
  rec.steps = static_cast<int>(rec.step_sum_rates.size());
  for (double r : rec.step_sum_rates) rec.sum_rate += r;
  if (rec.steps) rec.sum_rate /= rec.steps;
  rec.p_latency = pair_steps ? static_cast<double>(latency_ok) / pair_steps : 1.0;
  rec.p_outage = pair_steps ? static_cast<double>(outage_ok) / pair_steps : 1.0;
  rec.infeasible = infeasible_in_episode_;
  return rec;
}

EpisodeRecord Runner::run_episode(int episode) {
  EpisodeRecord rec = rollout(training_episode_seed(seed_, episode), episode, epsilon(episode), true);
  // Vehicles move between episodes; fading is redrawn within them.
  env_.set_scenario(advance_mobility(env_.scenario(), manifest_.params.mobility_dt_s));
  return rec;
}

EpisodeRecord Runner::evaluate_episode(std::uint64_t episode_seed) { return rollout(episode_seed, -1, 0.0, false); }

void Runner::save_checkpoint(const std::string& path_stem, int episode) const {
  Json side;
  side["scheme"] = to_string(manifest_.scheme);
  side["seed"] = seed_;
  side["episode"] = episode;
  side["epsilon"] = epsilon(episode);
  side["beamformer_calls"] = counters_.beamformer_calls;
  if (agent_) {
    nn::save_checkpoint(path_stem + ".bin", agent_->online());
    side["train_steps"] = agent_->train_steps();
    std::ostringstream rng;
    rng << agent_->rng();
    side["rng"] = rng.str();
  } else {
    Json means = Json::array(), counts = Json::array();
    for (std::size_t d = 0; d < bandit_->branch_sizes().size(); ++d) {
      Json m = Json::array(), c = Json::array();
      for (int a = 0; a < bandit_->branch_sizes()[d]; ++a) {
        m.push_back(bandit_->mean(static_cast<int>(d), a));
        c.push_back(bandit_->count(static_cast<int>(d), a));
      }
      means.push_back(m);
      counts.push_back(c);
    }
    side["arm_means"] = means;
    side["arm_counts"] = counts;
  }
  std::ofstream out(path_stem + ".json");
  if (!out) throw Error("cannot write checkpoint sidecar " + path_stem + ".json");
  out << side.dump(2) << "\n";
}

int Runner::load_checkpoint(const std::string& path_stem) {
  std::ifstream in(path_stem + ".json");
  if (!in) throw Error("cannot read checkpoint sidecar " + path_stem + ".json");
  Json side;
  try {
    in >> side;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint sidecar: ") + e.what());
  }
  if (side.value("scheme", std::string()) != to_string(manifest_.scheme))
    throw FormatError("checkpoint belongs to scheme " + side.value("scheme", std::string("?")));
  if (agent_) {
    const nn::QNetwork net = nn::load_checkpoint(path_stem + ".bin");
    if (!(net.spec() == agent_->online().spec())) throw FormatError("checkpoint network does not match the scheme");
    agent_->online() = net;
    agent_->sync_target();
    std::istringstream rng(side.at("rng").get<std::string>());
    rng >> agent_->rng();
  } else {
    const Json& counts = side.at("arm_counts");
    const Json& means = side.at("arm_means");
    bandit_->restore(counts.get<std::vector<std::vector<long>>>(), means.get<std::vector<std::vector<double>>>());
  }
  return side.value("episode", 0);
}

SeedRun run_seed(const ExperimentManifest& manifest, std::uint64_t seed, const std::string& checkpoint_dir,
                 const EpisodeCallback& on_episode) {
  Runner runner(manifest, seed);
  SeedRun out;
  out.seed = seed;
  for (int ep = 0; ep < manifest.episodes; ++ep) {
    out.episodes.push_back(runner.run_episode(ep));
    if (on_episode) on_episode(out.episodes.back());
    if (manifest.checkpoint_every > 0 && !checkpoint_dir.empty() && (ep + 1) % manifest.checkpoint_every == 0) {
      std::filesystem::create_directories(checkpoint_dir);
      runner.save_checkpoint(checkpoint_dir + "/seed" + std::to_string(seed) + "_ep" + std::to_string(ep + 1), ep + 1);
    }
  }
  out.counters = runner.counters();
  return out;
}

std::vector<SeedRun> run_manifest(const ExperimentManifest& manifest, const EpisodeCallback& on_episode) {
  manifest.validate();
  std::vector<SeedRun> runs;
  const std::string ckpt = manifest.output_dir.empty() ? std::string() : manifest.output_dir + "/checkpoints";
  for (auto seed : manifest.seeds) runs.push_back(run_seed(manifest, seed, ckpt, on_episode));
  if (!manifest.output_dir.empty()) {
    std::vector<EpisodeRecord> all;
    for (const auto& r : runs) all.insert(all.end(), r.episodes.begin(), r.episodes.end());
    write_run_outputs(manifest.output_dir, manifest_to_json(manifest), all);
  }
  return runs;
}

}  // namespace starris
