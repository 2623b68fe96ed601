// SPDX-License-Identifier: Apache-2.0

#include "starris/params.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace starris {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" + s + "'");
  }
}

int parse_int(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" + s + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "': not a boolean: '" + s + "'");
}

struct Field {
  std::string name;
  std::function<std::string(const SimParams&)> get;
  std::function<void(SimParams&, std::string_view)> set;
};

Field dbl(std::string name, double SimParams::*m) {
  return {name, [m](const SimParams& p) { return fmt_double(p.*m); },
          [m, name](SimParams& p, std::string_view v) { p.*m = parse_double(name, v); }};
}
Field integer(std::string name, int SimParams::*m) {
  return {name, [m](const SimParams& p) { return std::to_string(p.*m); },
          [m, name](SimParams& p, std::string_view v) { p.*m = parse_int(name, v); }};
}
Field boolean(std::string name, bool SimParams::*m) {
  return {name, [m](const SimParams& p) { return std::string(p.*m ? "true" : "false"); },
          [m, name](SimParams& p, std::string_view v) { p.*m = parse_bool(name, v); }};
}
Field coord(std::string name, Vec3 SimParams::*m, double Vec3::*c) {
  return {name, [m, c](const SimParams& p) { return fmt_double((p.*m).*c); },
          [m, c, name](SimParams& p, std::string_view v) { (p.*m).*c = parse_double(name, v); }};
}

template <typename E>
Field enumeration(std::string name, E SimParams::*m, std::vector<std::pair<std::string, E>> names) {
  return {name,
          [m, names](const SimParams& p) {
            for (const auto& [s, e] : names)
              if (e == p.*m) return s;
            return std::string("?");
          },
          [m, names, name](SimParams& p, std::string_view v) {
            const std::string s = trim(v);
            for (const auto& [n, e] : names) {
              if (n == s) {
                p.*m = e;
                return;
              }
            }
            throw ConfigError("config key '" + name + "': unknown value '" + s + "'");
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      dbl("bandwidth_w0", &SimParams::bandwidth_w0),
      dbl("noise_psd_dbm_hz", &SimParams::noise_psd_dbm_hz),
      dbl("pathloss_exp", &SimParams::pathloss_exp),
      dbl("surface_pathloss_exp", &SimParams::surface_pathloss_exp),
      dbl("direct_excess_loss_db", &SimParams::direct_excess_loss_db),
      dbl("ref_gain_db", &SimParams::ref_gain_db),
      dbl("rician_k", &SimParams::rician_k),
      dbl("carrier_hz", &SimParams::carrier_hz),
      dbl("element_spacing_wl", &SimParams::element_spacing_wl),
      dbl("outage_threshold_db", &SimParams::outage_threshold_db),
      dbl("outage_prob", &SimParams::outage_prob),
      enumeration("outage_sense", &SimParams::outage_sense,
                  {{"upper", OutageSense::Upper}, {"lower", OutageSense::Lower}}),
      boolean("threshold_is_effective", &SimParams::threshold_is_effective),
      enumeration("rmin_exponent", &SimParams::rmin_exponent,
                  {{"bandwidth", RminExponent::Bandwidth}, {"antennas", RminExponent::AntennaCount}}),
      enumeration("v2v_interference_path", &SimParams::v2v_interference_path,
                  {{"bs_channel", V2vInterferencePath::BsChannel},
                   {"receiver_channel", V2vInterferencePath::ReceiverChannel}}),
      dbl("payload_bits", &SimParams::payload_bits),
      dbl("time_budget_s", &SimParams::time_budget_s),
      dbl("p_i_max_db", &SimParams::p_i_max_db),
      dbl("p_v_max_dbm", &SimParams::p_v_max_dbm),
      integer("power_levels", &SimParams::power_levels),
      integer("phase_bits", &SimParams::phase_bits),
      integer("n_elements", &SimParams::n_elements),
      integer("n_antennas", &SimParams::n_antennas),
      integer("n_vues", &SimParams::n_vues),
      integer("n_v2v_pairs", &SimParams::n_v2v_pairs),
      dbl("r_min_bps", &SimParams::r_min_bps),
      dbl("amplitude_floor", &SimParams::amplitude_floor),
      boolean("uniform_amplitude", &SimParams::uniform_amplitude),
      coord("bs_x", &SimParams::bs_position, &Vec3::x),
      coord("bs_y", &SimParams::bs_position, &Vec3::y),
      coord("bs_z", &SimParams::bs_position, &Vec3::z),
      coord("ris_x", &SimParams::ris_position, &Vec3::x),
      coord("ris_y", &SimParams::ris_position, &Vec3::y),
      coord("ris_z", &SimParams::ris_position, &Vec3::z),
      dbl("road_length", &SimParams::road_length),
      dbl("road_width", &SimParams::road_width),
      integer("lanes_per_direction", &SimParams::lanes_per_direction),
      dbl("vehicle_height", &SimParams::vehicle_height),
      dbl("vehicle_intensity", &SimParams::vehicle_intensity),
      dbl("speed_min", &SimParams::speed_min),
      dbl("speed_max", &SimParams::speed_max),
      dbl("broadcast_range", &SimParams::broadcast_range),
      integer("max_redraws", &SimParams::max_redraws),
      integer("steps_per_episode", &SimParams::steps_per_episode),
      integer("element_groups", &SimParams::element_groups),
      dbl("mobility_dt_s", &SimParams::mobility_dt_s),
      dbl("discount", &SimParams::discount),
      dbl("learning_rate", &SimParams::learning_rate),
      integer("batch_size", &SimParams::batch_size),
      dbl("epsilon_initial", &SimParams::epsilon_initial),
      dbl("epsilon_final", &SimParams::epsilon_final),
      dbl("epsilon_decay_fraction", &SimParams::epsilon_decay_fraction),
      integer("episodes", &SimParams::episodes),
      integer("target_sync_period", &SimParams::target_sync_period),
      integer("replay_capacity", &SimParams::replay_capacity),
      enumeration("optimizer", &SimParams::optimizer,
                  {{"sgd", OptimizerKind::Sgd}, {"momentum", OptimizerKind::Momentum}, {"adam", OptimizerKind::Adam}}),
      dbl("momentum", &SimParams::momentum),
      integer("embed_width", &SimParams::embed_width),
      integer("res_blocks", &SimParams::res_blocks),
      integer("attention_heads", &SimParams::attention_heads),
      integer("fusion_width", &SimParams::fusion_width),
      integer("warmup_transitions", &SimParams::warmup_transitions),
      dbl("q1", &SimParams::q1),
      dbl("q2", &SimParams::q2),
      dbl("q3", &SimParams::q3),
      dbl("q4", &SimParams::q4),
      dbl("revenue_p0", &SimParams::revenue_p0),
      integer("sca_max_iters", &SimParams::sca_max_iters),
      dbl("sca_tol_rel", &SimParams::sca_tol_rel),
      boolean("xi_free", &SimParams::xi_free),
      boolean("linearize_reverse_convex", &SimParams::linearize_reverse_convex),
      integer("beamform_every", &SimParams::beamform_every),
  };
  return table;
}

const Field& find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.name == key) return f;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid parameters: " + what);
}

}  // namespace

void SimParams::validate() const {
  require(bandwidth_w0 > 0.0, "bandwidth_w0 must be positive");
  require(pathloss_exp >= 2.0, "pathloss_exp must be >= 2");
  require(surface_pathloss_exp >= 2.0, "surface_pathloss_exp must be >= 2");
  require(outage_prob > 0.0 && outage_prob < 1.0, "outage_prob must lie in (0,1)");
  require(power_levels >= 2, "power_levels must be >= 2");
  require(phase_bits >= 1 && phase_bits <= 16, "phase_bits must lie in [1,16]");
  require(n_elements >= 1 && n_antennas >= 1, "n_elements and n_antennas must be >= 1");
  require(n_vues >= 1 && n_v2v_pairs >= 0, "n_vues must be >= 1 and n_v2v_pairs >= 0");
  require(rician_k >= 0.0, "rician_k must be >= 0");
  require(noise_power_w() > 0.0 && std::isfinite(noise_power_w()), "noise power must be positive");
  require(payload_bits > 0.0 && time_budget_s > 0.0, "payload and time budget must be positive");
  require(amplitude_floor > 0.0 && amplitude_floor < 1.0, "amplitude_floor must lie in (0,1)");
  require(road_length > 0.0 && road_width > 0.0 && lanes_per_direction >= 1, "road geometry");
  require(speed_min >= 0.0 && speed_max >= speed_min, "speed range");
  require(steps_per_episode >= 1, "steps_per_episode must be >= 1");
  require(element_groups >= 1 && element_groups <= n_elements, "element_groups must lie in [1, n_elements]");
  require(discount > 0.0 && discount <= 1.0, "discount must lie in (0,1]");
  require(epsilon_initial >= 0.0 && epsilon_initial <= 1.0 && epsilon_final >= 0.0 && epsilon_final <= 1.0,
          "epsilon bounds");
  require(batch_size >= 1 && replay_capacity >= batch_size, "batch_size/replay_capacity");
  require(target_sync_period >= 1, "target_sync_period must be >= 1");
  require(attention_heads >= 1 && embed_width % attention_heads == 0, "embed_width must be divisible by heads");
  require(sca_max_iters >= 1 && beamform_every >= 1, "sca_max_iters and beamform_every must be >= 1");
}

SimParams default_params() { return SimParams{}; }

SimParams desk_profile() {
  SimParams p;
  p.bandwidth_w0 = 10e6;
  p.surface_pathloss_exp = 2.0;
  p.direct_excess_loss_db = 20.0;
  p.n_vues = 4;
  p.n_v2v_pairs = 2;
  p.n_elements = 8;
  p.n_antennas = 2;
  p.element_groups = 4;
  p.payload_bits = 1e7;
  p.episodes = 300;
  p.outage_sense = OutageSense::Lower;
  p.batch_size = 32;
  p.optimizer = OptimizerKind::Adam;
  p.learning_rate = 3e-4;
  p.target_sync_period = 100;
  p.embed_width = 16;
  p.attention_heads = 2;
  p.fusion_width = 32;
  p.warmup_transitions = 64;
  return p;
}

SimParams tiny_profile() {
  SimParams p = desk_profile();
  p.n_elements = 2;
  p.phase_bits = 1;
  p.element_groups = 2;
  p.n_vues = 2;
  p.n_v2v_pairs = 1;
  p.power_levels = 2;
  return p;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.name);
  return out;
}

void set_param(SimParams& p, std::string_view key, std::string_view value) { find_field(key).set(p, value); }

std::string get_param(const SimParams& p, std::string_view key) { return find_field(key).get(p); }

void apply_config_text(SimParams& p, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    set_param(p, trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
  }
}

SimParams load_config_file(const std::string& path, SimParams base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(base, ss.str());
  return base;
}

std::string to_config_text(const SimParams& p) {
  std::string out;
  for (const auto& f : fields()) out += f.name + " = " + f.get(p) + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t params_hash(const SimParams& p) { return fnv1a64(to_config_text(p)); }

std::string to_string(OutageSense s) { return s == OutageSense::Upper ? "upper" : "lower"; }

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::Momentum: return "momentum";
    case OptimizerKind::Adam: return "adam";
  }
  return "?";
}

}  // namespace starris
