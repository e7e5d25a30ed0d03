#include "shrinkflow/flow.hpp"

#include <algorithm>
#include <cmath>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

namespace {

// Linear interpolation on a sorted sample grid; infinity is sticky.
double interp(const Vec& x, const Vec& y, double t) {
  const Eigen::Index n = x.size();
  if (n == 0) throw std::out_of_range("empty series");
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (t < x(0) - tol || t > x(n - 1) + tol) throw std::out_of_range("time outside the sampled span");
  if (t <= x(0)) return y(0);
  if (t >= x(n - 1)) return y(n - 1);
  const double* base = x.data();
  const double* it = std::upper_bound(base, base + n, t);
  const Eigen::Index hi = it - base;
  const Eigen::Index lo = hi - 1;
  if (t == x(lo)) return y(lo);
  if (!std::isfinite(y(lo)) || !std::isfinite(y(hi))) return kInfiniteDistance;
  const double s = (t - x(lo)) / (x(hi) - x(lo));
  return (1.0 - s) * y(lo) + s * y(hi);
}

}  // namespace

double effective_c0(const FlowParams& p, const Shrinker& s) {
  return p.c0 > 0.0 ? p.c0 : 0.2 * s.radius;
}

double distance(const RadialGraph& g, double c0) {
  const GraphNorms n = graph_norms(g);
  if (n.total() > c0) return kInfiniteDistance;
  return g.grid->norm(g.heights);
}

Vec rescaled_velocity(const RadialGraph& g) {
  const GraphGeometry geo = graph_geometry(g);
  return (geo.graph_factor.array() *
          (-geo.mean_curvature.array() + 0.5 * geo.eta.array()))
      .matrix();
}

Vec q_remainder(const RadialGraph& g, const Spectrum& spectrum) {
  return rescaled_velocity(g) - apply_L(g.heights, spectrum);
}

FlowState make_state(RadialGraph g, double tau, const FlowParams& params) {
  const double c0 = effective_c0(params, g.grid->shrinker());
  FlowState st;
  st.tau = tau;
  st.distance = distance(g, c0);
  st.excess = excess(g);
  st.graph = std::move(g);
  return st;
}

namespace {

Vec flow_rhs(const Vec& u, GridPtr grid, const Spectrum& spectrum) {
  RadialGraph g{grid, u};
  return spectrum.filter(rescaled_velocity(g));
}

FlowState try_step(const FlowState& state, const Spectrum& spectrum,
                   const FlowParams& params, double dtau) {
  const Vec& u = state.graph.heights;
  GridPtr grid = state.graph.grid;
  const Vec k1 = flow_rhs(u, grid, spectrum);
  const Vec k2 = flow_rhs(u + 0.5 * dtau * k1, grid, spectrum);
  const Vec k3 = flow_rhs(u + 0.5 * dtau * k2, grid, spectrum);
  const Vec k4 = flow_rhs(u + dtau * k3, grid, spectrum);
  Vec next = u + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return make_state(RadialGraph{grid, std::move(next)}, state.tau + dtau, params);
}

}  // namespace

FlowState step(const FlowState& state, const Spectrum& spectrum,
               const FlowParams& params, double dtau) {
  if (!(dtau > 0.0)) throw std::invalid_argument("dtau must be positive");
  double dt = dtau;
  for (int rejects = 0; rejects <= params.max_rejects; ++rejects) {
    FlowState cand = try_step(state, spectrum, params, dt);
    if (cand.excess - state.excess <= params.excess_tol) return cand;
    dt *= 0.5;
  }
  throw StiffnessError("step rejected " + std::to_string(params.max_rejects + 1) +
                       " times at tau " + std::to_string(state.tau));
}

Trajectory run(const RadialGraph& initial, SpectrumPtr spectrum,
               const FlowParams& params, double tau_end, double sample_dtau) {
  if (!spectrum) throw std::invalid_argument("null spectrum");
  if (initial.grid != spectrum->grid())
    throw DimensionError("initial graph and spectrum use different grids");
  if (!(tau_end > 0.0) || !(sample_dtau > 0.0))
    throw std::invalid_argument("tau_end and sample_dtau must be positive");

  Trajectory traj;
  traj.spectrum = spectrum;
  traj.params = params;
  traj.sample_dtau = sample_dtau;

  FlowState st = make_state(initial, 0.0, params);
  traj.states.push_back(st);
  if (!std::isfinite(st.distance)) {
    traj.log.halted_infinite = true;
    return traj;
  }

  const long nsamples = static_cast<long>(std::ceil(tau_end / sample_dtau - 1e-9));
  for (long i = 1; i <= nsamples; ++i) {
    const double target = std::min(i * sample_dtau, tau_end);
    while (st.tau < target - 1e-12) {
      const double dt = std::min(params.dtau, target - st.tau);
      FlowState next = step(st, *spectrum, params, dt);
      if (next.tau < st.tau + dt - 1e-15) {
        ++traj.log.rejected;  // step was halved at least once
      }
      ++traj.log.accepted;
      st = std::move(next);
      if (!std::isfinite(st.distance)) break;
    }
    traj.states.push_back(st);
    if (!std::isfinite(st.distance)) {
      traj.log.halted_infinite = true;
      break;
    }
  }
  return traj;
}

MonotonicityReport monotonicity_audit(const Trajectory& traj) {
  if (traj.states.size() < 3) throw std::invalid_argument("need at least 3 samples");
  MonotonicityReport rep;
  const double F_sigma = traj.states.front().graph.grid->shrinker().gaussian_area;
  for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
    const FlowState& prev = traj.states[i - 1];
    const FlowState& cur = traj.states[i];
    const FlowState& next = traj.states[i + 1];
    const double lhs = ((next.excess + F_sigma) - (prev.excess + F_sigma)) /
                       (next.tau - prev.tau);
    const GraphGeometry geo = graph_geometry(cur.graph);
    const int n = cur.graph.grid->shrinker().n;
    double dissipation = 0.0;
    for (Eigen::Index j = 0; j < geo.measure.size(); ++j) {
      const double speed = -geo.mean_curvature(j) + 0.5 * geo.eta(j);
      dissipation += speed * speed *
                     gaussian_weight_sq(geo.positions.row(j).squaredNorm(), n) *
                     geo.measure(j);
    }
    const double defect = std::abs(lhs + dissipation);
    rep.taus.push_back(cur.tau);
    rep.defects.push_back(defect);
    rep.max_defect = std::max(rep.max_defect, defect);
    rep.max_dissipation = std::max(rep.max_dissipation, dissipation);
  }
  return rep;
}

TrajectorySeries series(const Trajectory& traj) {
  TrajectorySeries s;
  const Eigen::Index n = static_cast<Eigen::Index>(traj.states.size());
  s.tau.resize(n);
  s.dist.resize(n);
  s.excess.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.tau(i) = traj.states[i].tau;
    s.dist(i) = traj.states[i].distance;
    s.excess(i) = traj.states[i].excess;
  }
  return s;
}

double series_distance_at(const TrajectorySeries& s, double tau) {
  return interp(s.tau, s.dist, tau);
}

double series_excess_at(const TrajectorySeries& s, double tau) {
  return interp(s.tau, s.excess, tau);
}

double distance_at(const Trajectory& traj, double tau) {
  return series_distance_at(series(traj), tau);
}

double series_decay_order(const TrajectorySeries& s, double tau) {
  const double end = s.tau(s.tau.size() - 1);
  if (tau < s.tau(0) - 1e-12 || tau + 1.0 > end + 1e-12)
    throw std::domain_error("decay order undefined: window outside the sampled span");
  const double d0 = series_distance_at(s, tau);
  const double d1 = series_distance_at(s, tau + 1.0);
  if (!std::isfinite(d0) || !std::isfinite(d1) || d0 == 0.0 || d1 == 0.0)
    throw std::domain_error("decay order undefined: zero or infinite distance");
  return std::log(d0 / d1);
}

double decay_order(const Trajectory& traj, double tau) {
  return series_decay_order(series(traj), tau);
}

double unstable_fraction(const RadialGraph& g, const Spectrum& spectrum) {
  if (g.heights.size() != spectrum.grid()->nodes())
    throw DimensionError("graph does not match the spectrum grid");
  const Vec a = spectrum.analysis() * g.heights;
  const Vec& mu = spectrum.eigenvalues();
  double total = 0.0, unstable = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    total += a(i) * a(i);
    if (mu(i) < 0.0) unstable += a(i) * a(i);
  }
  return total > 0.0 ? unstable / total : 0.0;
}

SemiContinuityReport lemma25_audit(const TrajectorySeries& s, double epsilon) {
  SemiContinuityReport rep;
  const double end = s.tau(s.tau.size() - 1);
  for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
    const double t0 = s.tau(i);
    if (t0 + 1.0 > end + 1e-12) break;
    const double d0 = s.dist(i);
    if (!std::isfinite(d0) || d0 <= 0.0 || d0 >= epsilon) continue;
    const double drop = s.excess(i) - series_excess_at(s, t0 + 1.0);
    if (!(drop < epsilon)) continue;
    double worst = 1.0;
    for (Eigen::Index j = i; j < s.tau.size() && s.tau(j) <= t0 + 1.0 + 1e-12; ++j) {
      if (std::isfinite(s.dist(j))) worst = std::max(worst, s.dist(j) / d0);
    }
    rep.taus.push_back(t0);
    rep.ratios.push_back(worst);
    rep.empirical_C0 = std::max(rep.empirical_C0, worst);
    ++rep.windows_checked;
  }
  return rep;
}

SemiContinuityReport lemma25_audit(const Trajectory& traj, double epsilon) {
  return lemma25_audit(series(traj), epsilon);
}

}  // namespace shrinkflow
