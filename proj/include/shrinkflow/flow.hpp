#pragma once

#include <limits>
#include <vector>

#include "shrinkflow/drift_heat.hpp"
#include "shrinkflow/geometry.hpp"
#include "shrinkflow/spectrum.hpp"

namespace shrinkflow {

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

struct FlowParams {
  double dtau = 1e-3;      ///< base step of the explicit RK4 integrator
  double c0 = 0.0;         ///< graph-norm cutoff; 0 picks 0.2 * radius
  double excess_tol = 1e-8;///< allowed per-step excess increase before rejection
  int max_rejects = 5;
  double epsilon = 0.05;   ///< smallness threshold for the semi-continuity audit
};

double effective_c0(const FlowParams& p, const Shrinker& s);

/// Snapshot of the evolving graph at one rescaled time.
struct FlowState {
  RadialGraph graph;
  double tau = 0.0;
  double distance = 0.0;  ///< D_Sigma, or infinity outside the small-graph regime
  double excess = 0.0;    ///< A(M) = F(M) - F(Sigma)
};

struct StepLog {
  long accepted = 0;
  long rejected = 0;
  bool halted_infinite = false; ///< run stopped because the graph left the regime
};

struct Trajectory {
  std::vector<FlowState> states;
  StepLog log;
  SpectrumPtr spectrum;
  FlowParams params;
  double sample_dtau = 0.0;
};

/// Gaussian L^2 distance to Sigma through the graph function:
/// sqrt(int u^2 e^{-|x|^2/4}) over Sigma when the C^2 proxy norm stays below
/// c0, infinite otherwise.
double distance(const RadialGraph& g, double c0);

/// Normal speed -H + <x,nu>/2 converted to the height derivative:
/// du/dtau = w_u (-H_u + eta_u / 2). Vanishes identically at u = 0.
Vec rescaled_velocity(const RadialGraph& g);

/// Nonlinear remainder Q u = M u - L u.
Vec q_remainder(const RadialGraph& g, const Spectrum& spectrum);

FlowState make_state(RadialGraph g, double tau, const FlowParams& params);

/// One accepted RK4 step of du/dtau = M u, dealiased to the spectrum band.
/// Rejects and halves the step while the excess increases by more than
/// excess_tol; throws StiffnessError after max_rejects rejections.
FlowState step(const FlowState& state, const Spectrum& spectrum,
               const FlowParams& params, double dtau);

/// Integrates to tau_end (or until the graph leaves the small-graph regime),
/// sampling every sample_dtau.
Trajectory run(const RadialGraph& initial, SpectrumPtr spectrum,
               const FlowParams& params, double tau_end, double sample_dtau);

/// Discrete check of dF/dtau = -int |H + x^perp/2|^2 rho along a trajectory.
struct MonotonicityReport {
  double max_defect = 0.0;
  double max_dissipation = 0.0;
  std::vector<double> taus;
  std::vector<double> defects;
};
MonotonicityReport monotonicity_audit(const Trajectory& traj);

/// Time-series view of a trajectory: the audits only need (tau, D, A, F).
struct TrajectorySeries {
  Vec tau;
  Vec dist;
  Vec excess;
};
TrajectorySeries series(const Trajectory& traj);

/// Linear interpolation between samples; infinity is sticky. Throws
/// std::out_of_range outside the span.
double series_distance_at(const TrajectorySeries& s, double tau);
double series_excess_at(const TrajectorySeries& s, double tau);

/// Linear interpolation of D_Sigma between samples of a trajectory.
double distance_at(const Trajectory& traj, double tau);

/// Decay order N_Sigma(tau) = log(D(tau)/D(tau+1)). Throws std::domain_error
/// when either endpoint is zero, infinite, or outside the span.
double decay_order(const Trajectory& traj, double tau);
double series_decay_order(const TrajectorySeries& s, double tau);

/// Energy fraction carried by the unstable (mu < 0) modes of a state.
double unstable_fraction(const RadialGraph& g, const Spectrum& spectrum);

/// Semi-continuity audit: on windows where D and the unit-time excess drop
/// are below epsilon, records sup_{s in [0,1]} D(tau+s) <= C0 D(tau).
struct SemiContinuityReport {
  int windows_checked = 0;
  double empirical_C0 = 0.0;
  std::vector<double> taus;
  std::vector<double> ratios;
};
SemiContinuityReport lemma25_audit(const TrajectorySeries& s, double epsilon);
SemiContinuityReport lemma25_audit(const Trajectory& traj, double epsilon);

}  // namespace shrinkflow
