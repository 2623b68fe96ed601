// SPDX-License-Identifier: Apache-2.0

#include "starris/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace starris {

SpectrumAllocation::SpectrumAllocation(int n_vues, std::vector<int> vue_of_pair)
    : n_vues_(n_vues), vue_of_pair_(std::move(vue_of_pair)), pair_of_vue_(n_vues, kNone) {
  if (n_vues < 0) throw InvalidAllocation("negative VUE count");
  for (int v = 0; v < n_pairs(); ++v) {
    const int i = vue_of_pair_[v];
    if (i == kNone) continue;
    if (i < 0 || i >= n_vues)
      throw InvalidAllocation("pair " + std::to_string(v) + " assigned to unknown VUE " + std::to_string(i));
    if (pair_of_vue_[i] != kNone)
      throw InvalidAllocation("VUE " + std::to_string(i) + " channel shared by pairs " +
                              std::to_string(pair_of_vue_[i]) + " and " + std::to_string(v));
    pair_of_vue_[i] = v;
  }
}

SpectrumAllocation SpectrumAllocation::from_matrix(const std::vector<std::vector<int>>& a) {
  const int n_vues = static_cast<int>(a.size());
  const int n_pairs = n_vues == 0 ? 0 : static_cast<int>(a[0].size());
  std::vector<int> choice(n_pairs, kNone);
  for (int i = 0; i < n_vues; ++i) {
    if (static_cast<int>(a[i].size()) != n_pairs) throw InvalidAllocation("ragged allocation matrix");
    for (int v = 0; v < n_pairs; ++v) {
      if (a[i][v] != 0 && a[i][v] != 1) throw InvalidAllocation("allocation entries must be 0 or 1");
      if (a[i][v] == 0) continue;
      if (choice[v] != kNone)
        throw InvalidAllocation("pair " + std::to_string(v) + " occupies more than one V2I channel");
      choice[v] = i;
    }
  }
  return SpectrumAllocation(n_vues, std::move(choice));
}

std::vector<std::vector<int>> SpectrumAllocation::matrix() const {
  std::vector<std::vector<int>> a(n_vues_, std::vector<int>(n_pairs(), 0));
  for (int v = 0; v < n_pairs(); ++v)
    if (vue_of_pair_[v] != kNone) a[vue_of_pair_[v]][v] = 1;
  return a;
}

double power_of_level(int level, const SimParams& params) {
  if (level < 0 || level >= params.power_levels) throw IndexOutOfRange("power level " + std::to_string(level));
  return params.p_v_max_w() * level / (params.power_levels - 1);
}

bool on_power_grid(double p, const SimParams& params) {
  const double pmax = params.p_v_max_w();
  for (int k = 0; k < params.power_levels; ++k)
    if (std::abs(p - power_of_level(k, params)) <= 1e-12 * pmax) return true;
  return false;
}

double LinkReport::sum_rate_i() const { return std::accumulate(rate_i.begin(), rate_i.end(), 0.0); }
int LinkReport::latency_satisfied() const {
  return static_cast<int>(std::count(latency_ok.begin(), latency_ok.end(), true));
}
int LinkReport::outage_satisfied() const {
  return static_cast<int>(std::count(outage_ok.begin(), outage_ok.end(), true));
}
bool LinkReport::all_ok() const {
  auto all = [](const std::vector<bool>& f) { return std::all_of(f.begin(), f.end(), [](bool b) { return b; }); };
  return all(qos_ok) && all(latency_ok) && all(outage_ok);
}

double rate_of(double sinr, const SimParams& params) { return params.bandwidth_w0 * std::log2(1.0 + sinr); }

double effective_outage_threshold(const SimParams& params) {
  const double p0 = params.outage_prob;
  if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidProbability("outage probability must lie in (0, 1)");
  const double g0 = db_to_linear(params.outage_threshold_db);
  if (params.threshold_is_effective) return g0;
  return g0 / std::log(1.0 / (1.0 - p0));
}

double qos_sinr_floor(const SimParams& params) {
  const double x = params.rmin_exponent == RminExponent::Bandwidth ? params.bandwidth_w0 : params.n_antennas;
  return std::exp2(params.r_min_bps / x) - 1.0;
}

double v2i_interference(const ChannelSet& cs, const AllocationState& alloc, int i) {
  const int v = alloc.spectrum.pair_of_vue(i);
  if (v == SpectrumAllocation::kNone) return 0.0;
  return alloc.p_v2v.at(v) * std::norm(cs.h_v2v_to_bs.at(v));
}

double v2i_sinr(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc, int i,
                const SimParams& params) {
  const double s = std::norm(apply_beam(h_eff.at(i), alloc.p_v2i.at(i)));
  return s / (v2i_interference(cs, alloc, i) + params.noise_power_w());
}

double v2v_interference(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc, int v,
                        const SimParams& params) {
  const int i = alloc.spectrum.vue_of_pair(v);
  if (i == SpectrumAllocation::kNone) return 0.0;
  if (params.v2v_interference_path == V2vInterferencePath::ReceiverChannel)
    return std::norm(cs.h_v2i_to_v2vrx(i, v)) * alloc.p_v2i.at(i).squaredNorm();
  return std::norm(apply_beam(h_eff.at(i), alloc.p_v2i.at(i)));
}

double v2v_sinr(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc, int v,
                const SimParams& params) {
  const double s = alloc.p_v2v.at(v) * std::norm(cs.h_v2v.at(v));
  return s / (v2v_interference(cs, h_eff, alloc, v, params) + params.noise_power_w());
}

LinkReport evaluate(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc,
                    const SimParams& params) {
  const int n_vue = cs.n_vues();
  const int n_pair = cs.n_pairs();
  if (alloc.spectrum.n_vues() != n_vue || alloc.spectrum.n_pairs() != n_pair ||
      static_cast<int>(alloc.p_v2v.size()) != n_pair || static_cast<int>(alloc.p_v2i.size()) != n_vue ||
      static_cast<int>(h_eff.size()) != n_vue)
    throw ShapeMismatch("allocation does not match the channel set dimensions");
  const double noise = params.noise_power_w();

  LinkReport r;
  r.signal_i.resize(n_vue);
  r.g_v.resize(n_vue);
  r.gamma_i.resize(n_vue);
  r.rate_i.resize(n_vue);
  for (int i = 0; i < n_vue; ++i) {
    r.signal_i[i] = std::norm(apply_beam(h_eff[i], alloc.p_v2i[i]));
    r.g_v[i] = v2i_interference(cs, alloc, i);
    r.gamma_i[i] = r.signal_i[i] / (r.g_v[i] + noise);
    r.rate_i[i] = rate_of(r.gamma_i[i], params);
  }
  r.g_i.resize(n_pair);
  r.gamma_v.resize(n_pair);
  r.rate_v.resize(n_pair);
  for (int v = 0; v < n_pair; ++v) {
    r.g_i[v] = v2v_interference(cs, h_eff, alloc, v, params);
    r.gamma_v[v] = alloc.p_v2v[v] * std::norm(cs.h_v2v[v]) / (r.g_i[v] + noise);
    r.rate_v[v] = rate_of(r.gamma_v[v], params);
  }
  check_constraints(r, params);
  return r;
}

LinkReport evaluate(const ChannelSet& cs, const AllocationState& alloc, const SimParams& params) {
  return evaluate(cs, effective_v2i_channels(cs, alloc.ris), alloc, params);
}

void check_constraints(LinkReport& report, const SimParams& params) {
  const double gamma_ef = effective_outage_threshold(params);
  const double latency_rate = params.latency_rate_bps();
  report.qos_ok.assign(report.rate_i.size(), false);
  for (std::size_t i = 0; i < report.rate_i.size(); ++i) report.qos_ok[i] = report.rate_i[i] >= params.r_min_bps;
  report.latency_ok.assign(report.rate_v.size(), false);
  report.outage_ok.assign(report.rate_v.size(), false);
  for (std::size_t v = 0; v < report.rate_v.size(); ++v) {
    report.latency_ok[v] = report.rate_v[v] >= latency_rate;
    report.outage_ok[v] = params.outage_sense == OutageSense::Upper ? report.gamma_v[v] <= gamma_ef
                                                                         : report.gamma_v[v] >= gamma_ef;
  }
}

double revenue(double x, const SimParams& params) { return x >= 0.0 ? params.revenue_p0 : x; }

RewardTerms reward_terms(const LinkReport& report, const SimParams& params) {
  const double w0 = params.bandwidth_w0;
  const double gamma_ef = effective_outage_threshold(params);
  const double latency_rate = params.latency_rate_bps();
  RewardTerms t;
  for (double r : report.rate_i) {
    t.throughput += params.q1 * r / w0;
    t.qos += params.q2 * revenue((r - params.r_min_bps) / w0, params);
  }
  for (std::size_t v = 0; v < report.rate_v.size(); ++v) {
    t.latency += params.q3 * revenue((report.rate_v[v] - latency_rate) / w0, params);
    const double slack = params.outage_sense == OutageSense::Upper ? gamma_ef - report.gamma_v[v]
                                                                        : report.gamma_v[v] - gamma_ef;
    t.outage += params.q4 * revenue(slack / gamma_ef, params);
  }
  return t;
}

double reward(const LinkReport& report, const SimParams& params) { return reward_terms(report, params).total(); }

double reward_upper_bound(const LinkReport& report, const SimParams& params) {
  double bound = 0.0;
  for (double r : report.rate_i) bound += params.q1 * r / params.bandwidth_w0;
  const double n_i = static_cast<double>(report.rate_i.size());
  const double n_v = static_cast<double>(report.rate_v.size());
  return bound + (n_i * params.q2 + n_v * params.q3 + n_v * params.q4) * params.revenue_p0;
}

}  // namespace starris
