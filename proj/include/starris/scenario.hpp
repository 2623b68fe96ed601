// SPDX-License-Identifier: Apache-2.0
//
// Static world: road, BS and surface placement, vehicle drop, VUE / V2V selection.

#pragma once

#include "starris/params.hpp"

#include <cstdint>
#include <vector>

namespace starris {

struct Vehicle {
  Vec3 position;
  double speed = 0.0;      // m/s, magnitude
  double direction = 1.0;  // +1 moves towards +x, -1 towards -x
  int lane = 0;

  bool operator==(const Vehicle&) const = default;
};

struct V2vPair {
  int transmitter = -1;  // vehicle index
  int receiver = -1;     // vehicle index

  bool operator==(const V2vPair&) const = default;
};

struct Scenario {
  Vec3 bs_position;
  Vec3 ris_position;
  double road_length = 0.0;
  double road_width = 0.0;
  std::vector<Vehicle> vehicles;
  std::vector<int> vue_vehicles;  // vehicle index of each VUE
  std::vector<V2vPair> v2v_pairs;
  std::uint64_t rng_seed = 0;

  int n_vues() const { return static_cast<int>(vue_vehicles.size()); }
  int n_pairs() const { return static_cast<int>(v2v_pairs.size()); }
  const Vec3& vue_position(int i) const { return vehicles.at(vue_vehicles.at(i)).position; }
  const Vec3& tx_position(int v) const { return vehicles.at(v2v_pairs.at(v).transmitter).position; }
  const Vec3& rx_position(int v) const { return vehicles.at(v2v_pairs.at(v).receiver).position; }

  bool operator==(const Scenario&) const = default;
};

// Lane-centre y coordinate of lane index `lane` (0-based, increasing y).
double lane_center(const SimParams& params, int lane);

// Drops vehicles with a per-lane Poisson process and selects the VUEs and V2V
// pairs. VUEs and V2V transmitters are taken from two independent random
// orderings of the drop, so runs that differ only in n_vues / n_v2v_pairs share
// a common prefix of roles. Throws InsufficientVehicles after max_redraws.
Scenario drop_scenario(const SimParams& params, std::uint64_t seed);

// Moves every vehicle along its lane by speed*dt, wrapping on the road segment.
Scenario advance_mobility(Scenario scn, double dt);

}  // namespace starris
