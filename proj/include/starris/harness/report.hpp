// SPDX-License-Identifier: Apache-2.0
//
// Aggregation and export: per-episode CSV, JSON summary with 95% confidence
// intervals over seeds, empirical CDF samples, convergence measures.

#pragma once

#include "starris/harness/json_io.hpp"
#include "starris/harness/runner.hpp"

#include <string>
#include <vector>

namespace starris {

// Two-sided 97.5% quantile of Student's t with `df` degrees of freedom.
double t_quantile_975(int df);

struct Interval {
  double mean = 0.0;
  double half_width = 0.0;
  int n = 0;
  bool degenerate = false;  // fewer than two samples: width reported as zero
  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
};
Interval confidence_interval_95(const std::vector<double>& xs);

// Mean of the last `window` entries (all of them if fewer).
double tail_mean(const std::vector<double>& xs, int window);
std::vector<double> moving_average(const std::vector<double>& xs, int window);

// First episode at which the trailing `window` mean differs from the window
// before it by less than `tol` (relative); -1 if that never happens.
int convergence_episode(const std::vector<double>& rewards, int window = 50, double tol = 0.01);

// First episode at which the `smooth`-episode trailing mean has covered
// `fraction` of the way from the first smoothed value to the mean of the last
// `final_window` episodes; -1 if never.
int episodes_to_fraction(const std::vector<double>& rewards, double fraction = 0.95, int final_window = 100,
                         int smooth = 20);

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
};
// Right-continuous empirical CDF evaluated at each distinct sample value.
std::vector<CdfPoint> empirical_cdf(std::vector<double> samples);

// Column order: episode,scheme,seed,sum_rate,p_latency,reward. Rows sorted by
// (scheme, seed, episode) so merging is order-independent.
std::string metrics_csv(std::vector<EpisodeRecord> records);
// Parses metrics_csv output back (step samples are not stored there).
std::vector<EpisodeRecord> parse_metrics_csv(const std::string& text);

// Per scheme: per-seed means over the last `final_window` episodes and their
// 95% intervals for sum_rate, p_latency and reward, plus convergence episodes.
Json summary_json(const std::vector<EpisodeRecord>& records, int final_window = 100);

// Per scheme CDF of per-step sum rates over the last `final_window` episodes.
std::string cdf_csv(const std::vector<EpisodeRecord>& records, int final_window = 100);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Writes manifest.json, metrics.csv, summary.json and cdf.csv under dir.
void write_run_outputs(const std::string& dir, const Json& manifest, const std::vector<EpisodeRecord>& records);

}  // namespace starris
