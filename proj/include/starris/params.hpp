// SPDX-License-Identifier: Apache-2.0
//
// Simulation parameter set, defaults, and the flat key/value config format.

#pragma once

#include "starris/common.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace starris {

// Direction of the V2V reliability constraint. The printed constraint bounds the
// V2V SINR from above; the reliability reading bounds it from below.
enum class OutageSense { Upper, Lower };

// Which quantity divides R_min in the SINR floor 2^(R_min / x) - 1.
enum class RminExponent { Bandwidth, AntennaCount };

// Channel used for the V2I -> V2V-receiver interference term G_i.
enum class V2vInterferencePath { BsChannel, ReceiverChannel };

enum class OptimizerKind { Sgd, Momentum, Adam };

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct SimParams {
  // Radio.
  double bandwidth_w0 = 10e9;  // Hz per V2I channel
  double noise_psd_dbm_hz = -174.0;
  double pathloss_exp = 4.0;
  double surface_pathloss_exp = 4.0;  // exponent of the two Rician surface hops
  double direct_excess_loss_db = 0.0;  // extra attenuation on vehicle->BS links
  double ref_gain_db = -40.0;
  double rician_k = 10.0;
  double carrier_hz = 5.9e9;
  double element_spacing_wl = 0.5;
  double outage_threshold_db = 4.0;
  double outage_prob = 0.01;
  OutageSense outage_sense = OutageSense::Upper;
  bool threshold_is_effective = false;
  RminExponent rmin_exponent = RminExponent::Bandwidth;
  V2vInterferencePath v2v_interference_path = V2vInterferencePath::BsChannel;
  double payload_bits = 1060.0 * 8.0;
  double time_budget_s = 0.1;
  double p_i_max_db = 10.0;
  double p_v_max_dbm = 23.0;
  int power_levels = 4;
  int phase_bits = 2;
  int n_elements = 32;
  int n_antennas = 4;
  int n_vues = 20;
  int n_v2v_pairs = 6;
  double r_min_bps = 1e6;
  double amplitude_floor = 1e-3;
  bool uniform_amplitude = false;

  // Geometry and traffic.
  Vec3 bs_position{0.0, 0.0, 10.0};
  Vec3 ris_position{60.0, 10.0, 5.0};
  double road_length = 120.0;
  double road_width = 20.0;
  int lanes_per_direction = 2;
  double vehicle_height = 1.5;
  double vehicle_intensity = 0.1;  // vehicles per metre per lane
  double speed_min = 10.0;
  double speed_max = 20.0;
  double broadcast_range = 50.0;
  int max_redraws = 20;

  // Environment.
  int steps_per_episode = 20;
  int element_groups = 4;
  double mobility_dt_s = 0.1;

  // Learning.
  double discount = 0.98;  // a second listed discount of 0.9 is unused
  double learning_rate = 1e-3;
  int batch_size = 4;
  double epsilon_initial = 1.0;
  double epsilon_final = 0.02;
  double epsilon_decay_fraction = 0.3;
  int episodes = 1000;
  int target_sync_period = 100;
  int replay_capacity = 100000;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  double momentum = 0.9;
  int embed_width = 32;
  int res_blocks = 1;
  int attention_heads = 4;
  int fusion_width = 64;
  int warmup_transitions = 0;

  // Reward.
  double q1 = 1.0;
  double q2 = 1.0;
  double q3 = 1.0;
  double q4 = 1.0;
  double revenue_p0 = 1.0;

  // Beamformer.
  int sca_max_iters = 50;
  double sca_tol_rel = 1e-6;
  bool xi_free = false;
  bool linearize_reverse_convex = true;
  int beamform_every = 1;

  // Derived quantities, all linear SI.
  double noise_power_w() const { return dbm_to_watt(noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_w0)); }
  double ref_gain() const { return db_to_linear(ref_gain_db); }
  double p_i_max_w() const { return db_to_linear(p_i_max_db); }
  double p_v_max_w() const { return dbm_to_watt(p_v_max_dbm); }
  double latency_rate_bps() const { return payload_bits / time_budget_s; }
  double wavelength() const { return 299792458.0 / carrier_hz; }

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

// Table-I values plus the documented defaults for rows the table leaves out.
SimParams default_params();

// Desk-scale experiment profile (I=4, V=2, N=8, B=2, W0=10 MHz, 300 episodes).
SimParams desk_profile();

// Tiny topology used for exhaustive-oracle comparisons.
SimParams tiny_profile();

// Key/value config access. Keys are listed by config_keys().
std::vector<std::string> config_keys();
void set_param(SimParams& p, std::string_view key, std::string_view value);
std::string get_param(const SimParams& p, std::string_view key);

// Parses "key = value" lines; '#' starts a comment.
void apply_config_text(SimParams& p, std::string_view text);
SimParams load_config_file(const std::string& path, SimParams base = default_params());
std::string to_config_text(const SimParams& p);

// Stable 64-bit FNV-1a hash of the canonical config text.
std::uint64_t params_hash(const SimParams& p);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

std::string to_string(OutageSense s);
std::string to_string(OptimizerKind k);

}  // namespace starris
