// SPDX-License-Identifier: Apache-2.0
//
// Experiment description: which scheme, which parameters, which seeds.

#pragma once

#include "starris/nn/network.hpp"
#include "starris/params.hpp"
#include "starris/star_ris.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace starris {

enum class Scheme { StarProposed, StarRandom, RisProposed, RisRandom, DdqnVanilla, Mab };

std::string to_string(Scheme s);  // "STAR_PROPOSED", ...
Scheme scheme_from_string(const std::string& s);
std::vector<Scheme> all_schemes();

SurfaceMode surface_mode(Scheme s);
// Surface redrawn uniformly every step instead of being controlled.
bool random_surface(Scheme s);
bool uses_bandit(Scheme s);
nn::Trunk network_trunk(Scheme s);

struct ExperimentManifest {
  Scheme scheme = Scheme::StarProposed;
  SimParams params;
  std::vector<std::uint64_t> seeds{1};
  int episodes = 0;
  std::string output_dir;
  int checkpoint_every = 0;  // episodes; 0 disables
  bool randomize_spectrum = false;  // random schemes also redraw the spectrum choice

  void validate() const;
  // Hash of everything that influences the outputs (not output_dir).
  std::uint64_t hash() const;
};

ExperimentManifest make_manifest(Scheme scheme, const SimParams& params, std::vector<std::uint64_t> seeds);

}  // namespace starris
