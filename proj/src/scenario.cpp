// SPDX-License-Identifier: Apache-2.0

#include "starris/scenario.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace starris {

double lane_center(const SimParams& params, int lane) {
  const int lanes = 2 * params.lanes_per_direction;
  return (lane + 0.5) * params.road_width / lanes;
}

namespace {

std::vector<Vehicle> poisson_drop(const SimParams& params, Rng& rng) {
  const int lanes = 2 * params.lanes_per_direction;
  std::poisson_distribution<int> count(params.vehicle_intensity * params.road_length);
  std::uniform_real_distribution<double> along(0.0, params.road_length);
  std::uniform_real_distribution<double> speed(params.speed_min, params.speed_max);

  std::vector<Vehicle> out;
  for (int lane = 0; lane < lanes; ++lane) {
    const int n = params.vehicle_intensity > 0.0 ? count(rng) : 0;
    for (int k = 0; k < n; ++k) {
      Vehicle veh;
      veh.lane = lane;
      veh.position = {along(rng), lane_center(params, lane), params.vehicle_height};
      veh.speed = speed(rng);
      veh.direction = lane < params.lanes_per_direction ? 1.0 : -1.0;
      out.push_back(veh);
    }
  }
  return out;
}

int nearest_within(const std::vector<Vehicle>& vehicles, int from, double range) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(vehicles.size()); ++j) {
    if (j == from) continue;
    const double d = distance(vehicles[from].position, vehicles[j].position);
    if (d <= range && d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

}  // namespace

Scenario drop_scenario(const SimParams& params, std::uint64_t seed) {
  params.validate();
  for (int attempt = 0; attempt <= params.max_redraws; ++attempt) {
    Rng rng(derive_seed(seed, 0x5ce7a410ULL, attempt));
    Scenario scn;
    scn.bs_position = params.bs_position;
    scn.ris_position = params.ris_position;
    scn.road_length = params.road_length;
    scn.road_width = params.road_width;
    scn.rng_seed = seed;
    scn.vehicles = poisson_drop(params, rng);

    const int n = static_cast<int>(scn.vehicles.size());
    std::vector<int> vue_order(n), tx_order(n);
    std::iota(vue_order.begin(), vue_order.end(), 0);
    std::iota(tx_order.begin(), tx_order.end(), 0);
    std::shuffle(vue_order.begin(), vue_order.end(), rng);
    std::shuffle(tx_order.begin(), tx_order.end(), rng);

    if (n < params.n_vues) continue;
    scn.vue_vehicles.assign(vue_order.begin(), vue_order.begin() + params.n_vues);

    for (int tx : tx_order) {
      if (static_cast<int>(scn.v2v_pairs.size()) == params.n_v2v_pairs) break;
      const int rx = nearest_within(scn.vehicles, tx, params.broadcast_range);
      if (rx >= 0) scn.v2v_pairs.push_back({tx, rx});
    }
    if (static_cast<int>(scn.v2v_pairs.size()) < params.n_v2v_pairs) continue;
    return scn;
  }
  throw InsufficientVehicles("vehicle drop could not supply " + std::to_string(params.n_vues) + " VUEs and " +
                             std::to_string(params.n_v2v_pairs) + " V2V pairs after " +
                             std::to_string(params.max_redraws + 1) + " draws; check vehicle_intensity");
}

Scenario advance_mobility(Scenario scn, double dt) {
  if (!(dt > 0.0)) throw Error("advance_mobility: dt must be positive");
  const double len = scn.road_length;
  for (auto& v : scn.vehicles) {
    double x = std::fmod(v.position.x + v.direction * v.speed * dt, len);
    if (x < 0.0) x += len;
    v.position.x = x;
  }
  return scn;
}

}  // namespace starris
