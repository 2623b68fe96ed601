// SPDX-License-Identifier: Apache-2.0

#include "starris/env.hpp"

#include <algorithm>
#include <cmath>

namespace starris {

double ActionCatalog::joint_cardinality() const {
  double c = 1.0;
  for (int b : branch_sizes) c *= b;
  return c;
}

ActionCatalog action_space(const SimParams& params) {
  ActionCatalog cat;
  cat.n_vues = params.n_vues;
  cat.n_pairs = params.n_v2v_pairs;
  cat.n_groups = params.element_groups;
  cat.power_levels = params.power_levels;
  for (int v = 0; v < cat.n_pairs; ++v) cat.branch_sizes.push_back(cat.n_vues + 1);
  for (int k = 0; k < 3 * cat.n_groups; ++k) cat.branch_sizes.push_back(3);
  for (int v = 0; v < cat.n_pairs; ++v) cat.branch_sizes.push_back(cat.power_levels);
  return cat;
}

std::vector<int> flatten(const ActionTuple& a, const ActionCatalog& cat) {
  validate_action(a, cat);
  std::vector<int> out;
  out.reserve(cat.n_dims());
  out.insert(out.end(), a.spectrum.begin(), a.spectrum.end());
  out.insert(out.end(), a.amplitude.begin(), a.amplitude.end());
  out.insert(out.end(), a.phase_r.begin(), a.phase_r.end());
  out.insert(out.end(), a.phase_t.begin(), a.phase_t.end());
  out.insert(out.end(), a.power.begin(), a.power.end());
  return out;
}

ActionTuple unflatten(const std::vector<int>& flat, const ActionCatalog& cat) {
  if (static_cast<int>(flat.size()) != cat.n_dims())
    throw InvalidAction("action has " + std::to_string(flat.size()) + " dimensions, catalog has " +
                        std::to_string(cat.n_dims()));
  ActionTuple a;
  auto it = flat.begin();
  auto take = [&it](std::vector<int>& dst, int n) {
    dst.assign(it, it + n);
    it += n;
  };
  take(a.spectrum, cat.n_pairs);
  take(a.amplitude, cat.n_groups);
  take(a.phase_r, cat.n_groups);
  take(a.phase_t, cat.n_groups);
  take(a.power, cat.n_pairs);
  validate_action(a, cat);
  return a;
}

void validate_action(const ActionTuple& a, const ActionCatalog& cat) {
  auto check = [](const std::vector<int>& xs, std::size_t n, int size, const char* what) {
    if (xs.size() != n) throw InvalidAction(std::string(what) + ": wrong number of entries");
    for (int x : xs)
      if (x < 0 || x >= size)
        throw InvalidAction(std::string(what) + ": index " + std::to_string(x) + " outside [0, " +
                            std::to_string(size - 1) + "]");
  };
  check(a.spectrum, cat.n_pairs, cat.n_vues + 1, "spectrum choice");
  check(a.amplitude, cat.n_groups, static_cast<int>(kAmplitudeFactors.size()), "amplitude increment");
  check(a.phase_r, cat.n_groups, static_cast<int>(kPhaseSteps.size()), "reflection phase increment");
  check(a.phase_t, cat.n_groups, static_cast<int>(kPhaseSteps.size()), "transmission phase increment");
  check(a.power, cat.n_pairs, cat.power_levels, "power level");
}

ActionTuple identity_action(const ActionCatalog& cat, const std::vector<int>& spectrum, const std::vector<int>& power) {
  ActionTuple a;
  a.spectrum = spectrum;
  a.power = power;
  a.amplitude.assign(cat.n_groups, 1);
  a.phase_r.assign(cat.n_groups, 1);
  a.phase_t.assign(cat.n_groups, 1);
  return a;
}

int group_of_element(int n, int n_elements, int n_groups) {
  return static_cast<int>(static_cast<long long>(n) * n_groups / n_elements);
}

SpectrumAllocation resolve_spectrum(const std::vector<int>& requests, int n_vues) {
  std::vector<int> choice(requests.size(), SpectrumAllocation::kNone);
  std::vector<bool> taken(n_vues, false);
  for (std::size_t v = 0; v < requests.size(); ++v) {
    const int i = requests[v];
    if (i < 0 || i > n_vues) throw InvalidAction("spectrum request " + std::to_string(i));
    if (i == n_vues || taken[i]) continue;
    taken[i] = true;
    choice[v] = i;
  }
  return SpectrumAllocation(n_vues, std::move(choice));
}

StateLayout state_layout(const SimParams& params) {
  StateLayout l;
  l.n_tokens = params.n_vues + params.n_v2v_pairs + params.element_groups;
  l.token_width = 3 + std::max({kVueFeatures, kPairFeatures, kGroupFeatures});
  return l;
}

V2xEnv::V2xEnv(SimParams params, Scenario scenario, SurfaceMode mode)
    : params_(std::move(params)), scenario_(std::move(scenario)), mode_(mode) {
  params_.validate();
  if (scenario_.n_vues() != params_.n_vues || scenario_.n_pairs() != params_.n_v2v_pairs)
    throw ConfigError("scenario roles do not match n_vues / n_v2v_pairs");
  catalog_ = action_space(params_);
  layout_ = state_layout(params_);
}

std::vector<CVector> V2xEnv::equal_power_mrt(const std::vector<CVector>& h, double p_total) {
  std::vector<CVector> p;
  p.reserve(h.size());
  const double amp = std::sqrt(p_total / std::max<std::size_t>(h.size(), 1));
  for (const auto& hi : h) {
    const double n = hi.norm();
    if (n > 0.0)
      p.push_back(amp * hi.conjugate() / n);
    else
      p.push_back(CVector::Zero(hi.size()));
  }
  return p;
}

void V2xEnv::refresh_channels() {
  channels_ = draw_channels(scenario_, params_, seed_, static_cast<std::uint64_t>(step_));
  h_eff_ = effective_v2i_channels(channels_, alloc_.ris);
}

void V2xEnv::rebuild_allocation() {
  alloc_.spectrum = resolve_spectrum(spectrum_, params_.n_vues);
  alloc_.p_v2v.assign(params_.n_v2v_pairs, 0.0);
  for (int v = 0; v < params_.n_v2v_pairs; ++v) {
    const int i = alloc_.spectrum.vue_of_pair(v);
    spectrum_[v] = i == SpectrumAllocation::kNone ? params_.n_vues : i;
    // A pair without a channel stays silent.
    alloc_.p_v2v[v] = i == SpectrumAllocation::kNone ? 0.0 : power_of_level(power_[v], params_);
  }
}

std::vector<double> V2xEnv::reset(std::uint64_t seed) {
  seed_ = seed;
  step_ = 0;
  done_ = false;
  staged_ = false;
  alloc_.ris = initial_config(params_, mode_);
  spectrum_.assign(params_.n_v2v_pairs, params_.n_vues);
  for (int v = 0; v < params_.n_v2v_pairs && v < params_.n_vues; ++v) spectrum_[v] = v;
  power_.assign(params_.n_v2v_pairs, params_.power_levels - 1);
  rebuild_allocation();
  load_.assign(params_.n_v2v_pairs, params_.payload_bits);
  time_left_.assign(params_.n_v2v_pairs, params_.time_budget_s);
  refresh_channels();
  alloc_.p_v2i = equal_power_mrt(h_eff_, params_.p_i_max_w());
  state_before_ = encode();
  return state_before_;
}

void V2xEnv::apply_action(const ActionTuple& action, const StepOverrides& overrides) {
  if (done_) throw Error("step called on a finished episode; call reset first");
  validate_action(action, catalog_);
  const int n = params_.n_elements;
  if (overrides.surface) {
    if (overrides.surface->n_elements() != n) throw ShapeMismatch("surface override has wrong element count");
    alloc_.ris = *overrides.surface;
  } else {
    std::vector<double> delta(n);
    std::vector<int> steps_r(n), steps_t(n);
    for (int k = 0; k < n; ++k) {
      const int g = group_of_element(k, n, params_.element_groups);
      delta[k] = kAmplitudeFactors[action.amplitude[g]];
      steps_r[k] = kPhaseSteps[action.phase_r[g]];
      steps_t[k] = kPhaseSteps[action.phase_t[g]];
    }
    alloc_.ris = apply_amplitude_increment(alloc_.ris, delta, params_.amplitude_floor, params_.uniform_amplitude);
    alloc_.ris = apply_phase_steps(alloc_.ris, steps_r, steps_t);
  }
  spectrum_ = overrides.spectrum ? *overrides.spectrum : action.spectrum;
  if (static_cast<int>(spectrum_.size()) != params_.n_v2v_pairs)
    throw InvalidAction("spectrum override has wrong number of pairs");
  power_ = action.power;
  rebuild_allocation();
  h_eff_ = effective_v2i_channels(channels_, alloc_.ris);
  action_flat_ = flatten(action, catalog_);
  staged_ = true;
}

void V2xEnv::set_beamformers(std::vector<CVector> p) {
  if (static_cast<int>(p.size()) != params_.n_vues) throw ShapeMismatch("one beamformer per VUE expected");
  for (const auto& pi : p)
    if (pi.size() != params_.n_antennas) throw ShapeMismatch("beamformer length must equal the antenna count");
  alloc_.p_v2i = std::move(p);
}

StepResult V2xEnv::finish_step() {
  if (!staged_) throw Error("finish_step without a staged action");
  staged_ = false;
  StepResult out;
  out.report = evaluate(channels_, h_eff_, alloc_, params_);
  out.terms = reward_terms(out.report, params_);
  const double r = out.terms.total();
  if (!std::isfinite(r)) throw NonFiniteValue("reward is not finite");

  const int steps = params_.steps_per_episode;
  const double dt = params_.time_budget_s / steps;
  ++step_;
  bool delivered = true;
  for (int v = 0; v < params_.n_v2v_pairs; ++v) {
    load_[v] = std::max(0.0, load_[v] - out.report.rate_v[v] * dt);
    time_left_[v] = params_.time_budget_s * static_cast<double>(steps - step_) / steps;
    delivered = delivered && load_[v] == 0.0;
  }
  done_ = step_ >= steps || (params_.n_v2v_pairs > 0 && delivered);
  refresh_channels();

  out.transition.state = std::move(state_before_);
  out.transition.action = action_flat_;
  out.transition.reward = r;
  out.transition.done = done_;
  out.transition.next_state = encode();
  state_before_ = out.transition.next_state;
  return out;
}

StepResult V2xEnv::step(const ActionTuple& action, const StepOverrides& overrides) {
  apply_action(action, overrides);
  return finish_step();
}

std::vector<double> V2xEnv::encode() const {
  const LinkReport rep = evaluate(channels_, h_eff_, alloc_, params_);
  const double noise = params_.noise_power_w();
  const double p_i = params_.p_i_max_w();
  const double p_v = params_.p_v_max_w();
  auto lg = [](double x) { return std::log1p(std::max(x, 0.0)) / 10.0; };

  std::vector<double> s(layout_.size(), 0.0);
  const int w = layout_.token_width;
  int tok = 0;
  for (int i = 0; i < params_.n_vues; ++i, ++tok) {
    double* t = s.data() + tok * w;
    t[0] = 1.0;
    t[3] = channels_.side[i] == Side::Transmission ? 1.0 : 0.0;
    t[4] = lg(rep.signal_i[i] / noise);
    t[5] = lg(rep.g_v[i] / noise);
    t[6] = lg(h_eff_[i].squaredNorm() * p_i / noise);
    t[7] = lg(channels_.h_direct[i].squaredNorm() * p_i / noise);
    t[8] = alloc_.spectrum.pair_of_vue(i) == SpectrumAllocation::kNone ? 0.0 : 1.0;
  }
  for (int v = 0; v < params_.n_v2v_pairs; ++v, ++tok) {
    double* t = s.data() + tok * w;
    t[1] = 1.0;
    t[3] = lg(rep.gamma_v[v]);
    t[4] = load_[v] / params_.payload_bits;
    t[5] = time_left_[v] / params_.time_budget_s;
    t[6] = static_cast<double>(spectrum_[v]) / params_.n_vues;
    t[7] = static_cast<double>(power_[v]) / (params_.power_levels - 1);
    t[8] = lg(rep.g_i[v] / noise);
    t[9] = lg(p_v * std::norm(channels_.h_v2v[v]) / noise);
    t[10] = lg(p_v * std::norm(channels_.h_v2v_to_bs[v]) / noise);
  }
  const int levels = phase_levels(params_.phase_bits);
  std::vector<double> beta(params_.element_groups, 0.0), kr(params_.element_groups, 0.0),
      kt(params_.element_groups, 0.0), count(params_.element_groups, 0.0);
  for (int n = 0; n < params_.n_elements; ++n) {
    const int g = group_of_element(n, params_.n_elements, params_.element_groups);
    beta[g] += alloc_.ris.beta_r[n];
    kr[g] += static_cast<double>(alloc_.ris.kappa_r[n]) / levels;
    kt[g] += static_cast<double>(alloc_.ris.kappa_t[n]) / levels;
    count[g] += 1.0;
  }
  for (int g = 0; g < params_.element_groups; ++g, ++tok) {
    double* t = s.data() + tok * w;
    t[2] = 1.0;
    t[3] = beta[g] / count[g];
    t[4] = kr[g] / count[g];
    t[5] = kt[g] / count[g];
  }
  return s;
}

}  // namespace starris
