// SPDX-License-Identifier: Apache-2.0
//
// JSON views of parameters, manifests, scenarios, channels, reports and
// beamforming problems. Complex numbers are [re, im] pairs.

#pragma once

#include "starris/beamformer.hpp"
#include "starris/harness/manifest.hpp"
#include "starris/scenario.hpp"

#include <json.hpp>

namespace starris {

using Json = nlohmann::ordered_json;

Json params_to_json(const SimParams& p);
// Applies every key present in j on top of `base`.
SimParams params_from_json(const Json& j, SimParams base = default_params());

Json manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const Json& j);

Json scenario_to_json(const Scenario& s);
Json channels_to_json(const ChannelSet& cs);
ChannelSet channels_from_json(const Json& j);
// Spectrum as the VUE index per pair (-1 for none), powers, beams, surface.
Json allocation_to_json(const AllocationState& a);
AllocationState allocation_from_json(const Json& j, int n_vues);
Json report_to_json(const LinkReport& r);

Json complex_to_json(cplx c);
cplx complex_from_json(const Json& j);
Json cvector_to_json(const CVector& v);
CVector cvector_from_json(const Json& j);

Json problem_to_json(const BeamformingProblem& p);
BeamformingProblem problem_from_json(const Json& j);
Json solution_to_json(const BeamformingSolution& s);

}  // namespace starris
