// SPDX-License-Identifier: Apache-2.0
//
// Surface configuration: per-element amplitudes and quantized phases for the
// reflection and transmission faces, with the energy-splitting invariant.

#pragma once

#include "starris/params.hpp"

#include <vector>

namespace starris {

enum class SurfaceMode { Star, ReflectOnly };
enum class Face { Reflection, Transmission };

// Phases are stored as grid indices kappa so the configuration is exact;
// radians are derived on demand.
struct StarRisConfig {
  std::vector<double> beta_r;
  std::vector<double> beta_t;
  std::vector<int> kappa_r;
  std::vector<int> kappa_t;
  int phase_bits = 1;
  SurfaceMode mode = SurfaceMode::Star;

  int n_elements() const { return static_cast<int>(beta_r.size()); }
  double theta_r(int n) const;
  double theta_t(int n) const;

  bool operator==(const StarRisConfig&) const = default;
};

// Grid step pi / 2^(b-1) and number of grid points 2^b.
double phase_step(int bits);
int phase_levels(int bits);

// kappa * pi / 2^(b-1). Throws IndexOutOfRange unless 0 <= kappa < 2^b.
double quantize_phase(int kappa, int bits);

// beta = 1/sqrt(2) on both faces and zero phase (ReflectOnly: beta_r = 1).
StarRisConfig initial_config(int n_elements, int phase_bits, SurfaceMode mode);
StarRisConfig initial_config(const SimParams& params, SurfaceMode mode);

// Diagonal entries beta * exp(j theta) of the chosen face.
CVector coefficients(const StarRisConfig& cfg, Face face);
// Dense diagonal matrix form of coefficients().
CMatrix coefficient_matrix(const StarRisConfig& cfg, Face face);

// beta_r <- clamp(beta_r * delta, [floor, 1 - floor]); beta_t <- sqrt(1 - beta_r^2).
// ReflectOnly configurations are returned unchanged. With `uniform` set every
// element takes the value of element 0 afterwards.
StarRisConfig apply_amplitude_increment(const StarRisConfig& cfg, const std::vector<double>& delta,
                                        double floor, bool uniform = false);

// Additive phase update on the grid, in radians. Each increment must be an
// integer multiple of phase_step(bits), otherwise OffGridIncrement.
StarRisConfig apply_phase_increment(const StarRisConfig& cfg, const std::vector<double>& delta_r,
                                    const std::vector<double>& delta_t);

// Same update expressed directly in grid steps.
StarRisConfig apply_phase_steps(const StarRisConfig& cfg, const std::vector<int>& steps_r,
                                const std::vector<int>& steps_t);

// Largest |beta_r^2 + beta_t^2 - 1| over the elements.
double energy_split_error(const StarRisConfig& cfg);

// True when every phase index lies on the grid and every amplitude in [0, 1].
bool on_grid(const StarRisConfig& cfg);

}  // namespace starris
