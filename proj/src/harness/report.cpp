// SPDX-License-Identifier: Apache-2.0

#include "starris/harness/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace starris {

double t_quantile_975(int df) {
  static constexpr std::array<double, 30> kTable{12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                                 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                                 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw ConfigError("t quantile needs at least one degree of freedom");
  if (df <= 30) return kTable[df - 1];
  if (df <= 60) return 2.000 + (2.042 - 2.000) * (60.0 - df) / 30.0;
  return 1.960;
}

Interval confidence_interval_95(const std::vector<double>& xs) {
  Interval ci;
  ci.n = static_cast<int>(xs.size());
  if (xs.empty()) {
    ci.degenerate = true;
    return ci;
  }
  ci.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / ci.n;
  if (ci.n < 2) {
    ci.degenerate = true;
    return ci;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - ci.mean) * (x - ci.mean);
  const double sd = std::sqrt(ss / (ci.n - 1));
  ci.half_width = t_quantile_975(ci.n - 1) * sd / std::sqrt(static_cast<double>(ci.n));
  return ci;
}

double tail_mean(const std::vector<double>& xs, int window) {
  if (xs.empty()) return 0.0;
  const std::size_t n = std::min(xs.size(), static_cast<std::size_t>(std::max(window, 1)));
  return std::accumulate(xs.end() - static_cast<std::ptrdiff_t>(n), xs.end(), 0.0) / static_cast<double>(n);
}

std::vector<double> moving_average(const std::vector<double>& xs, int window) {
  if (window < 1) throw ConfigError("moving average window must be positive");
  std::vector<double> out;
  double sum = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sum += xs[k];
    if (k >= static_cast<std::size_t>(window)) sum -= xs[k - window];
    out.push_back(sum / static_cast<double>(std::min<std::size_t>(k + 1, window)));
  }
  return out;
}

int convergence_episode(const std::vector<double>& rewards, int window, double tol) {
  const int n = static_cast<int>(rewards.size());
  for (int e = 2 * window - 1; e < n; ++e) {
    const auto first = rewards.begin() + (e + 1 - 2 * window);
    const double prev = std::accumulate(first, first + window, 0.0) / window;
    const double cur = std::accumulate(first + window, first + 2 * window, 0.0) / window;
    if (std::abs(cur - prev) < tol * std::abs(prev)) return e;
  }
  return -1;
}

int episodes_to_fraction(const std::vector<double>& rewards, double fraction, int final_window, int smooth) {
  if (rewards.empty()) return -1;
  const auto ma = moving_average(rewards, smooth);
  const double target = tail_mean(rewards, final_window);
  const double start = ma[std::min<std::size_t>(smooth, ma.size()) - 1];
  const double gap = target - start;
  // partial averages before the window fills are too noisy to count
  for (std::size_t e = std::min<std::size_t>(smooth, ma.size()) - 1; e < ma.size(); ++e) {
    const double progress = gap > 0.0 ? (ma[e] - start) / gap : 1.0;
    if (progress >= fraction) return static_cast<int>(e);
  }
  return -1;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  std::vector<CdfPoint> out;
  const double n = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (k + 1 < samples.size() && samples[k + 1] == samples[k]) continue;
    out.push_back({samples[k], static_cast<double>(k + 1) / n});
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void sort_records(std::vector<EpisodeRecord>& records) {
  std::sort(records.begin(), records.end(), [](const EpisodeRecord& a, const EpisodeRecord& b) {
    const std::string sa = to_string(a.scheme), sb = to_string(b.scheme);
    if (sa != sb) return sa < sb;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.episode < b.episode;
  });
}

// scheme -> seed -> records in episode order
using Grouped = std::map<std::string, std::map<std::uint64_t, std::vector<const EpisodeRecord*>>>;

Grouped group(const std::vector<EpisodeRecord>& records) {
  Grouped g;
  for (const auto& r : records) g[to_string(r.scheme)][r.seed].push_back(&r);
  for (auto& [scheme, seeds] : g)
    for (auto& [seed, recs] : seeds)
      std::sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->episode < b->episode; });
  return g;
}

Json interval_json(const Interval& ci) {
  return {{"mean", ci.mean}, {"ci95_low", ci.lower()}, {"ci95_high", ci.upper()}, {"n", ci.n},
          {"degenerate", ci.degenerate}};
}

}  // namespace

std::string metrics_csv(std::vector<EpisodeRecord> records) {
  sort_records(records);
  std::string out = "episode,scheme,seed,sum_rate,p_latency,reward\n";
  for (const auto& r : records)
    out += std::to_string(r.episode) + "," + to_string(r.scheme) + "," + std::to_string(r.seed) + "," +
           fmt(r.sum_rate) + "," + fmt(r.p_latency) + "," + fmt(r.reward) + "\n";
  return out;
}

std::vector<EpisodeRecord> parse_metrics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "episode,scheme,seed,sum_rate,p_latency,reward")
    throw FormatError("metrics CSV header mismatch");
  std::vector<EpisodeRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw FormatError("metrics CSV row with " + std::to_string(f.size()) + " fields");
    EpisodeRecord r;
    try {
      r.episode = std::stoi(f[0]);
      r.scheme = scheme_from_string(f[1]);
      r.seed = std::stoull(f[2]);
      r.sum_rate = std::stod(f[3]);
      r.p_latency = std::stod(f[4]);
      r.reward = std::stod(f[5]);
    } catch (const std::logic_error&) {
      throw FormatError("metrics CSV: bad row '" + line + "'");
    }
    out.push_back(r);
  }
  return out;
}

Json summary_json(const std::vector<EpisodeRecord>& records, int final_window) {
  Json out;
  out["final_window"] = final_window;
  Json schemes = Json::object();
  for (const auto& [scheme, seeds] : group(records)) {
    std::vector<double> rate, latency, reward;
    Json per_seed = Json::array();
    for (const auto& [seed, recs] : seeds) {
      std::vector<double> r, l, w;
      for (const auto* e : recs) {
        r.push_back(e->sum_rate);
        l.push_back(e->p_latency);
        w.push_back(e->reward);
      }
      rate.push_back(tail_mean(r, final_window));
      latency.push_back(tail_mean(l, final_window));
      reward.push_back(tail_mean(w, final_window));
      per_seed.push_back({{"seed", seed},
                          {"episodes", recs.size()},
                          {"sum_rate", rate.back()},
                          {"p_latency", latency.back()},
                          {"reward", reward.back()},
                          {"convergence_episode", convergence_episode(w)},
                          {"episodes_to_95pct", episodes_to_fraction(w)}});
    }
    schemes[scheme] = {{"sum_rate", interval_json(confidence_interval_95(rate))},
                       {"p_latency", interval_json(confidence_interval_95(latency))},
                       {"reward", interval_json(confidence_interval_95(reward))},
                       {"seeds", per_seed}};
  }
  out["schemes"] = schemes;
  return out;
}

std::string cdf_csv(const std::vector<EpisodeRecord>& records, int final_window) {
  std::string out = "scheme,sum_rate,probability\n";
  for (const auto& [scheme, seeds] : group(records)) {
    std::vector<double> samples;
    for (const auto& [seed, recs] : seeds) {
      const std::size_t from = recs.size() > static_cast<std::size_t>(final_window) ? recs.size() - final_window : 0;
      for (std::size_t k = from; k < recs.size(); ++k)
        samples.insert(samples.end(), recs[k]->step_sum_rates.begin(), recs[k]->step_sum_rates.end());
    }
    for (const auto& p : empirical_cdf(samples)) out += scheme + "," + fmt(p.value) + "," + fmt(p.probability) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_run_outputs(const std::string& dir, const Json& manifest, const std::vector<EpisodeRecord>& records) {
  write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
  write_text_file(dir + "/metrics.csv", metrics_csv(records));
  write_text_file(dir + "/summary.json", summary_json(records).dump(2) + "\n");
  write_text_file(dir + "/cdf.csv", cdf_csv(records));
}

}  // namespace starris
