// SPDX-License-Identifier: Apache-2.0

#include "starris/harness/json_io.hpp"

namespace starris {

Json params_to_json(const SimParams& p) {
  Json j = Json::object();
  for (const auto& key : config_keys()) {
    const std::string v = get_param(p, key);
    Json parsed = Json::parse(v, nullptr, false);
    j[key] = parsed.is_discarded() || parsed.is_string() ? Json(v) : parsed;
  }
  return j;
}

SimParams params_from_json(const Json& j, SimParams base) {
  if (!j.is_object()) throw ConfigError("parameters must be a JSON object");
  for (const auto& [key, value] : j.items()) set_param(base, key, value.is_string() ? value.get<std::string>() : value.dump());
  base.validate();
  return base;
}

Json manifest_to_json(const ExperimentManifest& m) {
  Json j;
  j["scheme"] = to_string(m.scheme);
  j["episodes"] = m.episodes;
  j["seeds"] = m.seeds;
  j["checkpoint_every"] = m.checkpoint_every;
  j["randomize_spectrum"] = m.randomize_spectrum;
  j["output_dir"] = m.output_dir;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(m.hash()));
  j["hash"] = hash;
  j["params"] = params_to_json(m.params);
  return j;
}

ExperimentManifest manifest_from_json(const Json& j) {
  ExperimentManifest m;
  try {
    m.params = params_from_json(j.value("params", Json::object()));
    m.scheme = scheme_from_string(j.value("scheme", std::string("STAR_PROPOSED")));
    m.episodes = j.value("episodes", m.params.episodes);
    if (j.contains("seeds")) m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.checkpoint_every = j.value("checkpoint_every", 0);
    m.randomize_spectrum = j.value("randomize_spectrum", false);
    m.output_dir = j.value("output_dir", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

Json complex_to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json cvector_to_json(const CVector& v) {
  Json j = Json::array();
  for (const auto& c : v) j.push_back(complex_to_json(c));
  return j;
}

CVector cvector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("complex vector must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = complex_from_json(j[k]);
  return v;
}

namespace {

Json vec3(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["bs_position"] = vec3(s.bs_position);
  j["ris_position"] = vec3(s.ris_position);
  j["road_length"] = s.road_length;
  j["road_width"] = s.road_width;
  j["rng_seed"] = s.rng_seed;
  Json vehicles = Json::array();
  for (const auto& v : s.vehicles)
    vehicles.push_back({{"position", vec3(v.position)}, {"speed", v.speed}, {"direction", v.direction}, {"lane", v.lane}});
  j["vehicles"] = vehicles;
  j["vue_vehicles"] = s.vue_vehicles;
  Json pairs = Json::array();
  for (const auto& p : s.v2v_pairs) pairs.push_back({{"transmitter", p.transmitter}, {"receiver", p.receiver}});
  j["v2v_pairs"] = pairs;
  return j;
}

Json channels_to_json(const ChannelSet& cs) {
  Json j;
  Json direct = Json::array(), cascade = Json::array(), side = Json::array();
  for (int i = 0; i < cs.n_vues(); ++i) {
    direct.push_back(cvector_to_json(cs.h_direct[i]));
    cascade.push_back(cvector_to_json(cs.h_vue_ris[i]));
    side.push_back(cs.side[i] == Side::Reflection ? "reflection" : "transmission");
  }
  j["h_direct"] = direct;
  j["h_vue_ris"] = cascade;
  j["side"] = side;
  Json ris_bs = Json::array();
  for (Eigen::Index n = 0; n < cs.h_ris_bs.rows(); ++n) ris_bs.push_back(cvector_to_json(cs.h_ris_bs.row(n).transpose()));
  j["h_ris_bs"] = ris_bs;
  Json v2v = Json::array(), v2v_bs = Json::array();
  for (int v = 0; v < cs.n_pairs(); ++v) {
    v2v.push_back(complex_to_json(cs.h_v2v[v]));
    v2v_bs.push_back(complex_to_json(cs.h_v2v_to_bs[v]));
  }
  j["h_v2v"] = v2v;
  j["h_v2v_to_bs"] = v2v_bs;
  Json cross = Json::array();
  for (Eigen::Index i = 0; i < cs.h_v2i_to_v2vrx.rows(); ++i) cross.push_back(cvector_to_json(cs.h_v2i_to_v2vrx.row(i).transpose()));
  j["h_v2i_to_v2vrx"] = cross;
  return j;
}

namespace {

CMatrix rows_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of rows");
  if (j.empty()) return CMatrix(0, 0);
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const CVector row = cvector_from_json(j[r]);
    if (row.size() != m.cols()) throw FormatError(std::string(what) + " rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

}  // namespace

ChannelSet channels_from_json(const Json& j) {
  ChannelSet cs;
  try {
    for (const auto& h : j.at("h_direct")) cs.h_direct.push_back(cvector_from_json(h));
    for (const auto& h : j.at("h_vue_ris")) cs.h_vue_ris.push_back(cvector_from_json(h));
    for (const auto& s : j.at("side")) cs.side.push_back(s.get<std::string>() == "transmission" ? Side::Transmission : Side::Reflection);
    cs.h_ris_bs = rows_from_json(j.at("h_ris_bs"), "h_ris_bs");
    for (const auto& h : j.at("h_v2v")) cs.h_v2v.push_back(complex_from_json(h));
    for (const auto& h : j.at("h_v2v_to_bs")) cs.h_v2v_to_bs.push_back(complex_from_json(h));
    cs.h_v2i_to_v2vrx = rows_from_json(j.at("h_v2i_to_v2vrx"), "h_v2i_to_v2vrx");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("channel set: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(cs.n_vues());
  if (cs.h_vue_ris.size() != n || cs.side.size() != n || cs.h_v2v_to_bs.size() != cs.h_v2v.size())
    throw FormatError("channel set: per-VUE / per-pair arrays disagree in length");
  if (cs.n_pairs() > 0 && (cs.h_v2i_to_v2vrx.rows() != cs.n_vues() || cs.h_v2i_to_v2vrx.cols() != cs.n_pairs()))
    throw FormatError("channel set: h_v2i_to_v2vrx must be n_vues x n_pairs");
  return cs;
}

Json allocation_to_json(const AllocationState& a) {
  Json j;
  Json spectrum = Json::array();
  for (int c : a.spectrum.choices()) spectrum.push_back(c);
  j["spectrum"] = spectrum;
  j["p_v2v"] = a.p_v2v;
  Json beams = Json::array();
  for (const auto& p : a.p_v2i) beams.push_back(cvector_to_json(p));
  j["p_v2i"] = beams;
  j["ris"] = {{"beta_r", a.ris.beta_r}, {"beta_t", a.ris.beta_t}, {"kappa_r", a.ris.kappa_r}, {"kappa_t", a.ris.kappa_t},
              {"phase_bits", a.ris.phase_bits}, {"mode", a.ris.mode == SurfaceMode::Star ? "star" : "reflect_only"}};
  return j;
}

AllocationState allocation_from_json(const Json& j, int n_vues) {
  AllocationState a;
  try {
    a.spectrum = SpectrumAllocation(n_vues, j.at("spectrum").get<std::vector<int>>());
    a.p_v2v = j.at("p_v2v").get<std::vector<double>>();
    for (const auto& p : j.at("p_v2i")) a.p_v2i.push_back(cvector_from_json(p));
    const Json& r = j.at("ris");
    a.ris.beta_r = r.at("beta_r").get<std::vector<double>>();
    a.ris.beta_t = r.at("beta_t").get<std::vector<double>>();
    a.ris.kappa_r = r.at("kappa_r").get<std::vector<int>>();
    a.ris.kappa_t = r.at("kappa_t").get<std::vector<int>>();
    a.ris.phase_bits = r.at("phase_bits").get<int>();
    a.ris.mode = r.value("mode", std::string("star")) == "reflect_only" ? SurfaceMode::ReflectOnly : SurfaceMode::Star;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("allocation: ") + e.what());
  }
  return a;
}

Json report_to_json(const LinkReport& r) {
  Json j;
  j["signal_i"] = r.signal_i;
  j["g_v"] = r.g_v;
  j["gamma_i"] = r.gamma_i;
  j["rate_i"] = r.rate_i;
  j["g_i"] = r.g_i;
  j["gamma_v"] = r.gamma_v;
  j["rate_v"] = r.rate_v;
  j["qos_ok"] = r.qos_ok;
  j["latency_ok"] = r.latency_ok;
  j["outage_ok"] = r.outage_ok;
  j["sum_rate_i"] = r.sum_rate_i();
  return j;
}

Json problem_to_json(const BeamformingProblem& p) {
  Json j;
  Json h = Json::array();
  for (const auto& hi : p.h) h.push_back(cvector_to_json(hi));
  j["h"] = h;
  j["interference"] = p.interference;
  j["vue_of_pair"] = p.spectrum.choices();
  j["v2v_signal"] = p.v2v_signal;
  j["v2v_rx_gain"] = p.v2v_rx_gain;
  j["noise_w"] = p.noise_w;
  j["p_max_w"] = p.p_max_w;
  j["mu_floor"] = p.mu_floor;
  j["gamma_ef"] = p.gamma_ef;
  j["bandwidth"] = p.bandwidth;
  j["outage_sense"] = to_string(p.outage_sense);
  j["interference_path"] = p.interference_path == V2vInterferencePath::BsChannel ? "bs_channel" : "receiver_channel";
  return j;
}

BeamformingProblem problem_from_json(const Json& j) {
  BeamformingProblem p;
  try {
    for (const auto& hi : j.at("h")) p.h.push_back(cvector_from_json(hi));
    const int n = static_cast<int>(p.h.size());
    p.interference = j.value("interference", std::vector<double>(n, 0.0));
    const auto choices = j.value("vue_of_pair", std::vector<int>{});
    p.spectrum = SpectrumAllocation(n, choices);
    p.v2v_signal = j.value("v2v_signal", std::vector<double>(choices.size(), 0.0));
    p.v2v_rx_gain = j.value("v2v_rx_gain", std::vector<double>(choices.size(), 0.0));
    p.noise_w = j.at("noise_w").get<double>();
    p.p_max_w = j.at("p_max_w").get<double>();
    p.mu_floor = j.value("mu_floor", 0.0);
    p.gamma_ef = j.value("gamma_ef", 1.0);
    p.bandwidth = j.value("bandwidth", 1.0);
    const std::string sense = j.value("outage_sense", std::string("upper"));
    if (sense != "upper" && sense != "lower") throw ConfigError("outage_sense must be upper or lower");
    p.outage_sense = sense == "lower" ? OutageSense::Lower : OutageSense::Upper;
    const std::string path = j.value("interference_path", std::string("bs_channel"));
    if (path != "bs_channel" && path != "receiver_channel")
      throw ConfigError("interference_path must be bs_channel or receiver_channel");
    p.interference_path = path == "bs_channel" ? V2vInterferencePath::BsChannel : V2vInterferencePath::ReceiverChannel;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("beamforming problem: ") + e.what());
  }
  p.validate();
  return p;
}

Json solution_to_json(const BeamformingSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["iterations"] = s.iterations;
  j["sum_rate"] = s.sum_rate;
  Json p = Json::array();
  for (const auto& pi : s.p) p.push_back(cvector_to_json(pi));
  j["p"] = p;
  j["mu"] = s.mu;
  j["xi"] = s.xi;
  j["trace"] = s.trace;
  return j;
}

}  // namespace starris
