#pragma once

#include "shrinkflow/drift_heat.hpp"
#include "shrinkflow/flow.hpp"

namespace helpers {

using namespace shrinkflow;

// Trajectory whose states follow the exact linear drift-heat flow of the
// given mode vector: substrate for the doubling audits.
inline Trajectory linear_trajectory(const ModeVector& a, double tau_end, double dt,
                                    FlowParams params = {}) {
  Trajectory traj;
  traj.spectrum = a.spectrum;
  traj.params = params;
  traj.sample_dtau = dt;
  const long n = static_cast<long>(std::round(tau_end / dt));
  for (long i = 0; i <= n; ++i) {
    const double tau = i * dt;
    const ModeVector at = evolve_linear(a, tau);
    RadialGraph g = make_graph(a.spectrum->grid(), synthesize(at));
    traj.states.push_back(make_state(std::move(g), tau, params));
  }
  return traj;
}

}  // namespace helpers
