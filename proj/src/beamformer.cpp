// SPDX-License-Identifier: Apache-2.0

#include "starris/beamformer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

namespace starris {

void BeamformingProblem::validate() const {
  const int n = n_vues();
  if (n < 1) throw ShapeMismatch("beamforming problem without VUEs");
  for (const auto& hi : h)
    if (hi.size() != h.front().size() || hi.size() < 1) throw ShapeMismatch("VUE channels must share one length");
  if (static_cast<int>(interference.size()) != n || spectrum.n_vues() != n)
    throw ShapeMismatch("per-VUE data does not match the channel count");
  const int v = spectrum.n_pairs();
  if (static_cast<int>(v2v_signal.size()) != v || static_cast<int>(v2v_rx_gain.size()) != v)
    throw ShapeMismatch("per-pair data does not match the allocation");
  if (!(p_max_w > 0.0)) throw ConfigError("power budget must be positive");
  if (!(noise_w > 0.0)) throw ConfigError("noise power must be positive");
  if (!(gamma_ef > 0.0)) throw ConfigError("outage threshold must be positive");
  if (!(mu_floor >= 0.0)) throw ConfigError("SINR floor must be non-negative");
}

BeamformingProblem make_problem(const ChannelSet& cs, const std::vector<CVector>& h_eff, const AllocationState& alloc,
                                const SimParams& params) {
  BeamformingProblem prob;
  prob.h = h_eff;
  prob.spectrum = alloc.spectrum;
  for (int i = 0; i < static_cast<int>(h_eff.size()); ++i) prob.interference.push_back(v2i_interference(cs, alloc, i));
  for (int v = 0; v < alloc.spectrum.n_pairs(); ++v) {
    prob.v2v_signal.push_back(alloc.p_v2v.at(v) * std::norm(cs.h_v2v.at(v)));
    const int i = alloc.spectrum.vue_of_pair(v);
    prob.v2v_rx_gain.push_back(i == SpectrumAllocation::kNone ? 0.0 : std::norm(cs.h_v2i_to_v2vrx(i, v)));
  }
  prob.noise_w = params.noise_power_w();
  prob.p_max_w = params.p_i_max_w();
  prob.mu_floor = qos_sinr_floor(params);
  prob.gamma_ef = effective_outage_threshold(params);
  prob.bandwidth = params.bandwidth_w0;
  prob.outage_sense = params.outage_sense;
  prob.interference_path = params.v2v_interference_path;
  prob.validate();
  return prob;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

SolverOptions solver_options(const SimParams& params) {
  SolverOptions o;
  o.max_iters = params.sca_max_iters;
  o.tol_rel = params.sca_tol_rel;
  o.xi_free = params.xi_free;
  o.linearize_reverse_convex = params.linearize_reverse_convex;
  return o;
}

double taylor_sqrt_lower_bound(double xi_prev, double mu_prev, double xi, double mu) {
  if (!(xi_prev > 0.0) || !(mu_prev > 0.0))
    throw DegenerateExpansionPoint("square-root expansion needs positive xi and mu");
  return std::sqrt(xi_prev * mu_prev) + 0.5 * std::sqrt(xi_prev / mu_prev) * (mu - mu_prev) +
         0.5 * std::sqrt(mu_prev / xi_prev) * (xi - xi_prev);
}

double stacked_norm(const std::vector<CVector>& p) {
  double s = 0.0;
  for (const auto& pi : p) s += pi.squaredNorm();
  return std::sqrt(s);
}

NormBall relax_power_constraint(double p_max_w) {
  if (!(p_max_w > 0.0)) throw ConfigError("power budget must be positive");
  return NormBall{std::sqrt(p_max_w)};
}

bool NormBall::contains(const std::vector<CVector>& p, double tol) const { return stacked_norm(p) <= radius + tol; }

std::vector<CVector> NormBall::project(std::vector<CVector> p) const {
  const double n = stacked_norm(p);
  if (n > radius)
    for (auto& pi : p) pi *= radius / n;
  return p;
}

std::vector<double> beam_sinrs(const BeamformingProblem& prob, const std::vector<CVector>& p) {
  std::vector<double> out;
  for (int i = 0; i < prob.n_vues(); ++i)
    out.push_back(std::norm(apply_beam(prob.h[i], p.at(i))) / (prob.interference[i] + prob.noise_w));
  return out;
}

double beam_sum_rate(const BeamformingProblem& prob, const std::vector<CVector>& p) {
  double r = 0.0;
  for (double g : beam_sinrs(prob, p)) r += prob.bandwidth * std::log2(1.0 + g);
  return r;
}

namespace {

// Normalized outage row of pair v: interference at its receiver over noise
// must be >= (upper) or <= (lower) `bound`. Rows the beams cannot affect are
// dropped: unshared pairs, and rows whose bound is already met (upper) or can
// never be met (lower) with zero V2I interference.
struct PairRow {
  int vue = -1;
  double bound = 0.0;
  double weight = 0.0;  // interference over noise per unit normalized beam energy
  bool all_components = false;  // true: whole beam energy counts, false: only the aligned part
};

std::vector<PairRow> pair_rows(const BeamformingProblem& prob) {
  std::vector<PairRow> rows;
  for (int v = 0; v < prob.spectrum.n_pairs(); ++v) {
    const int i = prob.spectrum.vue_of_pair(v);
    if (i == SpectrumAllocation::kNone) continue;
    const double bound = prob.v2v_signal[v] / prob.gamma_ef / prob.noise_w - 1.0;
    if (bound <= 0.0) continue;
    PairRow r;
    r.vue = i;
    r.bound = bound;
    if (prob.interference_path == V2vInterferencePath::BsChannel) {
      r.weight = prob.p_max_w * prob.h[i].squaredNorm() / prob.noise_w;
    } else {
      r.weight = prob.p_max_w * prob.v2v_rx_gain[v] / prob.noise_w;
      r.all_components = true;
    }
    rows.push_back(r);
  }
  return rows;
}

double pair_interference_over_noise(const BeamformingProblem& prob, const PairRow& r, const CVector& p) {
  if (!r.all_components) return std::norm(apply_beam(prob.h[r.vue], p)) / prob.noise_w;
  return r.weight / prob.p_max_w * p.squaredNorm();
}

}  // namespace

double max_violation(const BeamformingProblem& prob, const std::vector<CVector>& p) {
  double worst = stacked_norm(p) / std::sqrt(prob.p_max_w) - 1.0;
  for (double g : beam_sinrs(prob, p)) worst = std::max(worst, prob.mu_floor > 0.0 ? 1.0 - g / prob.mu_floor : -g);
  for (const auto& r : pair_rows(prob)) {
    const double x = pair_interference_over_noise(prob, r, p.at(r.vue));
    worst = std::max(worst, prob.outage_sense == OutageSense::Upper ? (r.bound - x) / r.bound
                                                                         : (x - r.bound) / r.bound);
  }
  return worst;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// c(x) = b + g.x - sum_j d_j x_j^2 >= 0, concave by construction (d >= 0).
struct Row {
  double b = 0.0;
  VectorXd g;
  VectorXd d;  // empty when the row is linear

  double value(const VectorXd& x) const {
    double c = b + g.dot(x);
    if (d.size()) c -= (d.array() * x.array().square()).sum();
    return c;
  }
  VectorXd gradient(const VectorXd& x) const {
    if (!d.size()) return g;
    return g - 2.0 * (d.array() * x.array()).matrix();
  }
};

// minimize lin.x - sum_k w_k log(1 + x_{idx_k}) over the rows.
struct Program {
  VectorXd lin;
  std::vector<std::pair<int, double>> logs;
  std::vector<Row> rows;

  double objective(const VectorXd& x) const {
    double f = lin.dot(x);
    for (auto [k, w] : logs) f -= w * std::log1p(x[k]);
    return f;
  }
  bool strictly_feasible(const VectorXd& x) const {
    for (auto [k, w] : logs)
      if (!(1.0 + x[k] > 0.0)) return false;
    for (const auto& r : rows)
      if (!(r.value(x) > 0.0)) return false;
    return true;
  }
  double barrier(const VectorXd& x, double t) const {
    double phi = t * objective(x);
    for (const auto& r : rows) phi -= std::log(r.value(x));
    return phi;
  }
};

// Log-barrier path following from a strictly feasible x, stopping once the
// duality-gap bound m / t falls below gap_tol (relative).
void barrier_minimize(const Program& prog, VectorXd& x, double t, double gap_tol) {
  const int n = static_cast<int>(x.size());
  const double m = static_cast<double>(prog.rows.size());
  for (int outer = 0; outer < 40; ++outer) {
    for (int it = 0; it < 60; ++it) {
      VectorXd grad = t * prog.lin;
      MatrixXd hess = MatrixXd::Zero(n, n);
      for (auto [k, w] : prog.logs) {
        const double q = 1.0 + x[k];
        grad[k] -= t * w / q;
        hess(k, k) += t * w / (q * q);
      }
      for (const auto& r : prog.rows) {
        const double c = r.value(x);
        const VectorXd dc = r.gradient(x);
        grad -= dc / c;
        hess.noalias() += dc * dc.transpose() / (c * c);
        if (r.d.size()) hess.diagonal() += 2.0 * r.d / c;
      }
      hess.diagonal().array() += 1e-14 * (1.0 + hess.diagonal().array().abs());
      const VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement) || decrement <= 1e-9) break;
      const double phi0 = prog.barrier(x, t);
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60 && !accepted; ++ls, alpha *= 0.5) {
        const VectorXd trial = x + alpha * step;
        if (prog.strictly_feasible(trial) && prog.barrier(trial, t) <= phi0 - 0.25 * alpha * decrement) {
          x = trial;
          accepted = true;
        }
      }
      // No sufficient decrease left at double precision.
      if (!accepted) break;
    }
    if (m / t < gap_tol * std::max(1.0, std::abs(prog.objective(x)))) break;
    t *= 100.0;
  }
}

// Real coordinates of the beams. Per VUE: a (the component along the matched
// direction, real by the rotation argument), z (2(B-1) coordinates in the
// channel's null space), mu, and optionally xi (normalized to G + sigma^2).
struct Layout {
  int n_vues = 0;
  int b = 0;
  bool xi_free = false;
  int a(int i) const { return i; }
  int z(int i, int k) const { return n_vues + i * 2 * (b - 1) + k; }
  int mu(int i) const { return n_vues * (2 * b - 1) + i; }
  int xi(int i) const { return n_vues * 2 * b + i; }
  int beam_size() const { return n_vues * (2 * b - 1); }
  int size() const { return n_vues * (2 * b + (xi_free ? 1 : 0)); }
};

struct Basis {
  CMatrix q;    // column 0: matched direction, others span the null space
  double norm;  // ||h||
};

Basis basis_of(const CVector& h) {
  Basis out;
  out.norm = h.norm();
  const int b = static_cast<int>(h.size());
  CVector u = out.norm > 0.0 ? CVector(h.conjugate() / out.norm) : CVector(CVector::Unit(b, 0));
  const CMatrix um = u;
  Eigen::HouseholderQR<CMatrix> qr(um);
  CMatrix q = qr.householderQ() * CMatrix::Identity(b, b);
  q.col(0) = u;  // fixes the phase of the leading column
  out.q = q;
  return out;
}

class Model {
 public:
  Model(const BeamformingProblem& prob, const SolverOptions& opts) : prob_(prob), opts_(opts) {
    prob.validate();
    lay_.n_vues = prob.n_vues();
    lay_.b = prob.n_antennas();
    lay_.xi_free = opts.xi_free;
    for (int i = 0; i < lay_.n_vues; ++i) {
      basis_.push_back(basis_of(prob.h[i]));
      xi0_.push_back(prob.interference[i] + prob.noise_w);
      snr_.push_back(prob.p_max_w * basis_.back().norm * basis_.back().norm / xi0_.back());
    }
    pairs_ = pair_rows(prob);
    if (prob.outage_sense == OutageSense::Upper && !pairs_.empty() && !opts.linearize_reverse_convex)
      throw ConfigError("outage rows bound interference from below, which is not convex; enable "
                        "linearize_reverse_convex to solve by successive linearization");
  }

  const Layout& layout() const { return lay_; }
  double snr(int i) const { return snr_[i]; }

  std::vector<CVector> beams(const VectorXd& x) const {
    const double scale = std::sqrt(prob_.p_max_w);
    std::vector<CVector> p;
    for (int i = 0; i < lay_.n_vues; ++i) {
      CVector c(lay_.b);
      c[0] = x[lay_.a(i)];
      for (int k = 1; k < lay_.b; ++k) c[k] = cplx(x[lay_.z(i, 2 * (k - 1))], x[lay_.z(i, 2 * (k - 1) + 1)]);
      p.push_back(scale * (basis_[i].q * c));
    }
    return p;
  }

  // Beam coordinates of p after rotating each p_i so h_i p_i is real and
  // non-negative. mu / xi entries are left at zero.
  VectorXd coordinates(const std::vector<CVector>& p) const {
    VectorXd x = VectorXd::Zero(lay_.size());
    const double scale = std::sqrt(prob_.p_max_w);
    for (int i = 0; i < lay_.n_vues; ++i) {
      CVector c = basis_[i].q.adjoint() * p.at(i) / scale;
      if (std::abs(c[0]) > 0.0) c *= std::conj(c[0]) / std::abs(c[0]);
      x[lay_.a(i)] = c[0].real();
      for (int k = 1; k < lay_.b; ++k) {
        x[lay_.z(i, 2 * (k - 1))] = c[k].real();
        x[lay_.z(i, 2 * (k - 1) + 1)] = c[k].imag();
      }
    }
    return x;
  }

  // Normalized beam energy counted by a pair row.
  VectorXd pair_selector(const PairRow& r, int size) const {
    VectorXd d = VectorXd::Zero(size);
    d[lay_.a(r.vue)] = r.weight;
    if (r.all_components)
      for (int k = 0; k < 2 * (lay_.b - 1); ++k) d[lay_.z(r.vue, k)] = r.weight;
    return d;
  }

  // Beam-only rows shared by the main and phase-1 programs, on vectors of
  // length `size` whose leading entries are the beam coordinates.
  std::vector<Row> beam_rows(const VectorXd& x0, int size) const {
    std::vector<Row> rows;
    Row ball;
    ball.b = 1.0;
    ball.g = VectorXd::Zero(size);
    ball.d = VectorXd::Zero(size);
    ball.d.head(lay_.beam_size()).setOnes();
    rows.push_back(ball);
    for (const auto& pr : pairs_) {
      const VectorXd d = pair_selector(pr, size);
      Row r;
      if (prob_.outage_sense == OutageSense::Upper) {
        // Tangent of the convex energy at x0 lies below it: 2 d x0.x - d x0^2 >= bound.
        r.g = 2.0 * (d.array() * x0.head(size).array()).matrix();
        r.b = -(d.array() * x0.head(size).array().square()).sum() - pr.bound;
      } else {
        r.g = VectorXd::Zero(size);
        r.d = d;
        r.b = pr.bound;
      }
      rows.push_back(r);
    }
    return rows;
  }

  Program main_program(const VectorXd& x0) const {
    const int n = lay_.size();
    Program prog;
    prog.lin = VectorXd::Zero(n);
    prog.rows = beam_rows(x0, n);
    for (int i = 0; i < lay_.n_vues; ++i) {
      prog.logs.push_back({lay_.mu(i), 1.0});
      // a sqrt(snr) >= first-order expansion of sqrt(xi mu) at (xi0, mu0); the
      // constant terms of the expansion cancel.
      const double mu0 = x0[lay_.mu(i)];
      const double xi0 = lay_.xi_free ? x0[lay_.xi(i)] : 1.0;
      Row taylor;
      taylor.g = VectorXd::Zero(n);
      taylor.g[lay_.a(i)] = std::sqrt(snr_[i]);
      taylor.g[lay_.mu(i)] = -0.5 * std::sqrt(xi0 / mu0);
      if (lay_.xi_free) {
        taylor.g[lay_.xi(i)] = -0.5 * std::sqrt(mu0 / xi0);
      } else {
        taylor.b = -0.5 * std::sqrt(mu0 * xi0);
      }
      prog.rows.push_back(taylor);
      Row floor;
      floor.g = VectorXd::Zero(n);
      floor.g[lay_.mu(i)] = 1.0;
      floor.b = -prob_.mu_floor;
      prog.rows.push_back(floor);
      if (lay_.xi_free) {
        Row xi_row;
        xi_row.g = VectorXd::Zero(n);
        xi_row.g[lay_.xi(i)] = 1.0;
        xi_row.b = -1.0;
        prog.rows.push_back(xi_row);
      }
    }
    return prog;
  }

  // Rows on [beam coordinates, s] with s added to every row.
  Program phase1_program(const VectorXd& beam0) const {
    const int nb = lay_.beam_size();
    const int n = nb + 1;
    Program prog;
    prog.lin = VectorXd::Zero(n);
    prog.lin[nb] = 1.0;
    VectorXd x0 = VectorXd::Zero(n);
    x0.head(nb) = beam0.head(nb);
    std::vector<Row> rows = beam_rows(x0, n);
    for (int i = 0; i < lay_.n_vues; ++i) {
      Row qos;  // a sqrt(snr) >= sqrt(floor), the SINR floor with mu at the floor
      qos.g = VectorXd::Zero(n);
      qos.g[lay_.a(i)] = std::sqrt(snr_[i]);
      qos.b = -std::sqrt(prob_.mu_floor);
      rows.push_back(qos);
    }
    for (auto& r : rows) {
      const double scale = std::max({r.g.norm(), r.d.size() ? r.d.maxCoeff() : 0.0, 1e-300});
      r.b /= scale;
      r.g /= scale;
      if (r.d.size()) r.d /= scale;
      r.g[nb] = 1.0;
    }
    prog.rows = std::move(rows);
    return prog;
  }

  // Interior point of the main program from beam coordinates: mu strictly
  // between the floor and the SINR the beam supports, xi just above 1.
  std::optional<VectorXd> complete(VectorXd x) const {
    for (int i = 0; i < lay_.n_vues; ++i) {
      const double a = x[lay_.a(i)];
      const double sinr = a > 0.0 ? a * a * snr_[i] : 0.0;
      if (!(sinr > prob_.mu_floor)) return std::nullopt;
      double xi = 1.0;
      if (lay_.xi_free) {
        xi = 1.0 + std::min(1e-3, 0.5 * (sinr / std::max(prob_.mu_floor, 1e-300) - 1.0));
        x[lay_.xi(i)] = xi;
      }
      x[lay_.mu(i)] = prob_.mu_floor + 0.9 * (sinr / xi - prob_.mu_floor);
      if (!(x[lay_.mu(i)] > 0.0)) return std::nullopt;
    }
    if (!main_program(x).strictly_feasible(x)) return std::nullopt;
    return x;
  }

  double rate_of_mu(const VectorXd& x) const {
    double r = 0.0;
    for (int i = 0; i < lay_.n_vues; ++i) r += prob_.bandwidth * std::log2(1.0 + x[lay_.mu(i)]);
    return r;
  }

  BeamformingSolution solution(const VectorXd& x, bool with_slacks) const {
    BeamformingSolution s;
    s.p = beams(x);
    const auto sinr = beam_sinrs(prob_, s.p);
    for (int i = 0; i < lay_.n_vues; ++i) {
      s.mu.push_back(with_slacks ? x[lay_.mu(i)] : sinr[i]);
      s.xi.push_back(xi0_[i] * (with_slacks && lay_.xi_free ? x[lay_.xi(i)] : 1.0));
    }
    s.sum_rate = beam_sum_rate(prob_, s.p);
    return s;
  }

  VectorXd equal_power_start() const {
    VectorXd x = VectorXd::Zero(lay_.size());
    // Slightly inside the ball so the start is strictly feasible for it.
    for (int i = 0; i < lay_.n_vues; ++i) x[lay_.a(i)] = std::sqrt((1.0 - 1e-6) / lay_.n_vues);
    return x;
  }

 private:
  const BeamformingProblem& prob_;
  SolverOptions opts_;
  Layout lay_;
  std::vector<Basis> basis_;
  std::vector<double> xi0_;
  std::vector<double> snr_;
  std::vector<PairRow> pairs_;
};

constexpr double kGapTol = 1e-9;

struct Restored {
  VectorXd x;
  bool feasible = false;
};

Restored restore(const Model& model, const VectorXd& start) {
  if (auto x = model.complete(start)) return {*x, true};
  const int nb = model.layout().beam_size();
  VectorXd y(nb + 1);
  y.head(nb) = start.head(nb);
  double best = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 30; ++round) {
    const Program prog = model.phase1_program(y);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : prog.rows) worst = std::max(worst, -(r.value(y) - y[nb]));
    y[nb] = worst + 1.0;
    barrier_minimize(prog, y, 1.0, 1e-9);
    VectorXd x = VectorXd::Zero(model.layout().size());
    x.head(nb) = y.head(nb);
    if (y[nb] < 0.0)
      if (auto done = model.complete(x)) return {*done, true};
    if (!(y[nb] < best - 1e-10)) break;
    best = y[nb];
  }
  VectorXd x = VectorXd::Zero(model.layout().size());
  x.head(nb) = y.head(nb);
  return {x, false};
}

}  // namespace

BeamformingSolution feasibility_restore(const BeamformingProblem& prob, const SolverOptions& opts) {
  const Model model(prob, opts);
  const Restored r = restore(model, model.equal_power_start());
  BeamformingSolution s = model.solution(r.x, r.feasible);
  if (!r.feasible) {
    s.p = relax_power_constraint(prob.p_max_w).project(std::move(s.p));
    s.status = SolveStatus::Infeasible;
  }
  return s;
}

BeamformingSolution sca_solve(const BeamformingProblem& prob, const BeamformingSolution* init,
                              const SolverOptions& opts) {
  if (opts.max_iters < 1) throw ConfigError("SCA needs at least one iteration");
  const Model model(prob, opts);
  Restored start;
  if (init) {
    VectorXd x = model.coordinates(init->p);
    x.head(model.layout().beam_size()) *= 1.0 - 1e-6;
    start = restore(model, x);
  } else {
    start = restore(model, model.equal_power_start());
  }
  if (!start.feasible) {
    BeamformingSolution s = model.solution(start.x, false);
    s.p = relax_power_constraint(prob.p_max_w).project(std::move(s.p));
    s.status = SolveStatus::Infeasible;
    return s;
  }

  VectorXd x = start.x;
  std::vector<double> trace{model.rate_of_mu(x)};
  SolveStatus status = SolveStatus::MaxIters;
  int iters = 0;
  for (int j = 1; j <= opts.max_iters; ++j) {
    const Program prog = model.main_program(x);
    if (!prog.strictly_feasible(x)) {
      status = SolveStatus::Optimal;
      break;
    }
    VectorXd next = x;
    barrier_minimize(prog, next, 1.0, kGapTol);
    const double value = model.rate_of_mu(next);
    iters = j;
    // The previous iterate is feasible for this program, so a lower value can
    // only come from the barrier gap; keep the better point and stop.
    if (value < trace.back()) {
      status = SolveStatus::Optimal;
      break;
    }
    x = next;
    const double gain = value - trace.back();
    trace.push_back(value);
    if (gain <= opts.tol_rel * std::abs(value)) {
      status = SolveStatus::Optimal;
      break;
    }
  }
  BeamformingSolution s = model.solution(x, true);
  s.trace = std::move(trace);
  s.status = status;
  s.iterations = iters;
  return s;
}

GridOracleResult grid_oracle(const BeamformingProblem& prob, int magnitudes, int phases) {
  prob.validate();
  if (prob.n_vues() != 1 || prob.n_antennas() != 1 || prob.spectrum.n_pairs() > 1)
    throw ShapeMismatch("grid oracle covers one single-antenna VUE and at most one pair");
  GridOracleResult best;
  const double radius = std::sqrt(prob.p_max_w);
  for (int m = 1; m <= magnitudes; ++m) {
    for (int k = 0; k < phases; ++k) {
      const cplx p = std::polar(radius * m / magnitudes, kTwoPi * k / phases);
      const std::vector<CVector> beams{CVector::Constant(1, p)};
      if (max_violation(prob, beams) > 0.0) continue;
      ++best.feasible_points;
      const double r = beam_sum_rate(prob, beams);
      if (r > best.sum_rate) {
        best.sum_rate = r;
        best.p = p;
      }
    }
  }
  return best;
}

}  // namespace starris
