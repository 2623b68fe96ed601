// SPDX-License-Identifier: Apache-2.0

#include "starris/star_ris.hpp"

#include <algorithm>
#include <cmath>

namespace starris {

namespace {

int wrap_index(int k, int levels) {
  k %= levels;
  return k < 0 ? k + levels : k;
}

void check_sizes(const StarRisConfig& cfg, std::size_t n, const char* what) {
  if (n != cfg.beta_r.size())
    throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(cfg.beta_r.size()) +
                        " entries, got " + std::to_string(n));
}

}  // namespace

double phase_step(int bits) {
  if (bits < 1) throw IndexOutOfRange("phase bits must be >= 1");
  return kPi / std::ldexp(1.0, bits - 1);
}

int phase_levels(int bits) {
  if (bits < 1 || bits > 16) throw IndexOutOfRange("phase bits must be in [1, 16]");
  return 1 << bits;
}

double quantize_phase(int kappa, int bits) {
  const int levels = phase_levels(bits);
  if (kappa < 0 || kappa >= levels)
    throw IndexOutOfRange("phase index " + std::to_string(kappa) + " outside [0, " + std::to_string(levels - 1) +
                          "]");
  return kappa * phase_step(bits);
}

double StarRisConfig::theta_r(int n) const { return quantize_phase(kappa_r.at(n), phase_bits); }
double StarRisConfig::theta_t(int n) const { return quantize_phase(kappa_t.at(n), phase_bits); }

StarRisConfig initial_config(int n_elements, int phase_bits, SurfaceMode mode) {
  if (n_elements < 1) throw ConfigError("surface needs at least one element");
  phase_levels(phase_bits);
  StarRisConfig cfg;
  cfg.phase_bits = phase_bits;
  cfg.mode = mode;
  const double half = std::sqrt(0.5);
  cfg.beta_r.assign(n_elements, mode == SurfaceMode::ReflectOnly ? 1.0 : half);
  cfg.beta_t.assign(n_elements, mode == SurfaceMode::ReflectOnly ? 0.0 : half);
  cfg.kappa_r.assign(n_elements, 0);
  cfg.kappa_t.assign(n_elements, 0);
  return cfg;
}

StarRisConfig initial_config(const SimParams& params, SurfaceMode mode) {
  return initial_config(params.n_elements, params.phase_bits, mode);
}

CVector coefficients(const StarRisConfig& cfg, Face face) {
  const int n = cfg.n_elements();
  const double step = phase_step(cfg.phase_bits);
  CVector d(n);
  for (int k = 0; k < n; ++k) {
    const bool refl = face == Face::Reflection;
    const double beta = refl ? cfg.beta_r[k] : cfg.beta_t[k];
    const double theta = (refl ? cfg.kappa_r[k] : cfg.kappa_t[k]) * step;
    d[k] = std::polar(beta, theta);
  }
  return d;
}

CMatrix coefficient_matrix(const StarRisConfig& cfg, Face face) {
  const CVector d = coefficients(cfg, face);
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  m.diagonal() = d;
  return m;
}

StarRisConfig apply_amplitude_increment(const StarRisConfig& cfg, const std::vector<double>& delta, double floor,
                                        bool uniform) {
  check_sizes(cfg, delta.size(), "amplitude increment");
  if (cfg.mode == SurfaceMode::ReflectOnly) return cfg;
  StarRisConfig out = cfg;
  const double lo = floor, hi = 1.0 - floor;
  for (int n = 0; n < cfg.n_elements(); ++n) {
    const double br = std::clamp(cfg.beta_r[n] * delta[n], lo, hi);
    if (br == cfg.beta_r[n]) continue;
    out.beta_r[n] = br;
    out.beta_t[n] = std::sqrt(1.0 - br * br);
  }
  if (uniform) {
    std::fill(out.beta_r.begin(), out.beta_r.end(), out.beta_r[0]);
    std::fill(out.beta_t.begin(), out.beta_t.end(), out.beta_t[0]);
  }
  return out;
}

StarRisConfig apply_phase_steps(const StarRisConfig& cfg, const std::vector<int>& steps_r,
                                const std::vector<int>& steps_t) {
  check_sizes(cfg, steps_r.size(), "reflection phase increment");
  check_sizes(cfg, steps_t.size(), "transmission phase increment");
  const int levels = phase_levels(cfg.phase_bits);
  StarRisConfig out = cfg;
  for (int n = 0; n < cfg.n_elements(); ++n) {
    out.kappa_r[n] = wrap_index(cfg.kappa_r[n] + steps_r[n], levels);
    // The transmission face carries no energy on a reflect-only surface.
    if (cfg.mode == SurfaceMode::Star) out.kappa_t[n] = wrap_index(cfg.kappa_t[n] + steps_t[n], levels);
  }
  return out;
}

StarRisConfig apply_phase_increment(const StarRisConfig& cfg, const std::vector<double>& delta_r,
                                    const std::vector<double>& delta_t) {
  const double step = phase_step(cfg.phase_bits);
  auto to_steps = [&](const std::vector<double>& delta) {
    std::vector<int> steps(delta.size());
    for (std::size_t k = 0; k < delta.size(); ++k) {
      const double q = delta[k] / step;
      const double r = std::round(q);
      if (!std::isfinite(q) || std::abs(q - r) > 1e-9)
        throw OffGridIncrement("phase increment " + std::to_string(delta[k]) + " is not a multiple of " +
                               std::to_string(step));
      steps[k] = static_cast<int>(std::fmod(r, 1 << 20));
    }
    return steps;
  };
  return apply_phase_steps(cfg, to_steps(delta_r), to_steps(delta_t));
}

double energy_split_error(const StarRisConfig& cfg) {
  double worst = 0.0;
  for (int n = 0; n < cfg.n_elements(); ++n)
    worst = std::max(worst, std::abs(cfg.beta_r[n] * cfg.beta_r[n] + cfg.beta_t[n] * cfg.beta_t[n] - 1.0));
  return worst;
}

bool on_grid(const StarRisConfig& cfg) {
  const int levels = phase_levels(cfg.phase_bits);
  for (int n = 0; n < cfg.n_elements(); ++n) {
    if (cfg.kappa_r[n] < 0 || cfg.kappa_r[n] >= levels) return false;
    if (cfg.kappa_t[n] < 0 || cfg.kappa_t[n] >= levels) return false;
    if (cfg.beta_r[n] < 0.0 || cfg.beta_r[n] > 1.0 || cfg.beta_t[n] < 0.0 || cfg.beta_t[n] > 1.0) return false;
  }
  return true;
}

}  // namespace starris
