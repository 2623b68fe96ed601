// SPDX-License-Identifier: Apache-2.0

#include "starris/harness/manifest.hpp"

#include <array>

namespace starris {

namespace {

constexpr std::array<std::pair<Scheme, const char*>, 6> kNames{{
    {Scheme::StarProposed, "STAR_PROPOSED"},
    {Scheme::StarRandom, "STAR_RANDOM"},
    {Scheme::RisProposed, "RIS_PROPOSED"},
    {Scheme::RisRandom, "RIS_RANDOM"},
    {Scheme::DdqnVanilla, "DDQN_VANILLA"},
    {Scheme::Mab, "MAB"},
}};

}  // namespace

std::string to_string(Scheme s) {
  for (auto [k, name] : kNames)
    if (k == s) return name;
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  for (auto [k, name] : kNames)
    if (s == name) return k;
  throw ConfigError("unknown scheme '" + s + "'");
}

std::vector<Scheme> all_schemes() {
  std::vector<Scheme> out;
  for (auto [k, name] : kNames) out.push_back(k);
  return out;
}

SurfaceMode surface_mode(Scheme s) {
  return s == Scheme::RisProposed || s == Scheme::RisRandom ? SurfaceMode::ReflectOnly : SurfaceMode::Star;
}

bool random_surface(Scheme s) { return s == Scheme::StarRandom || s == Scheme::RisRandom; }

bool uses_bandit(Scheme s) { return s == Scheme::Mab; }

nn::Trunk network_trunk(Scheme s) { return s == Scheme::DdqnVanilla ? nn::Trunk::Residual : nn::Trunk::Attention; }

void ExperimentManifest::validate() const {
  params.validate();
  if (episodes < 0) throw ConfigError("episodes must be non-negative");
  if (seeds.empty()) throw ConfigError("manifest needs at least one seed");
  if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be non-negative");
}

std::uint64_t ExperimentManifest::hash() const {
  std::string text = to_config_text(params);
  text += "scheme=" + to_string(scheme) + "\nepisodes=" + std::to_string(episodes) +
          "\nrandomize_spectrum=" + (randomize_spectrum ? "1" : "0") + "\nseeds=";
  for (auto s : seeds) text += std::to_string(s) + ",";
  return fnv1a64(text);
}

ExperimentManifest make_manifest(Scheme scheme, const SimParams& params, std::vector<std::uint64_t> seeds) {
  ExperimentManifest m;
  m.scheme = scheme;
  m.params = params;
  m.seeds = std::move(seeds);
  m.episodes = params.episodes;
  return m;
}

}  // namespace starris
