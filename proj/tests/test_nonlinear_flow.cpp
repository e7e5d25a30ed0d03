#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "shrinkflow/errors.hpp"
#include "shrinkflow/flow.hpp"

using namespace shrinkflow;

namespace {

const double kR = std::sqrt(2.0);

SpectrumPtr flow_spectrum() {
  static SpectrumPtr sp = build_spectrum(round_shrinker(1), 32, Grid::circle(128));
  return sp;
}

Vec cos_mode(const Grid& grid, int k, double amp) {
  Vec u(grid.nodes());
  for (Eigen::Index j = 0; j < grid.nodes(); ++j) u(j) = amp * std::cos(k * grid.theta()(j));
  return u;
}

// exact round-circle solution of dr/dtau = r/2 - 1/r
double exact_radius(double r0, double tau) {
  return std::sqrt(2.0 + (r0 * r0 - 2.0) * std::exp(tau));
}

}  // namespace

TEST_CASE("rescaled velocity closed forms") {
  auto sp = flow_spectrum();
  auto grid = sp->grid();
  CHECK(rescaled_velocity(zero_graph(grid)).cwiseAbs().maxCoeff() < 1e-10);
  for (double c : {0.2, -0.2, 0.01}) {
    const Vec v = rescaled_velocity(make_graph(grid, Vec::Constant(grid->nodes(), c)));
    const double expected = -1.0 / (kR + c) + 0.5 * (kR + c);
    CHECK(v.maxCoeff() == doctest::Approx(expected).epsilon(1e-11));
    CHECK(v.minCoeff() == doctest::Approx(expected).epsilon(1e-11));
    if (c > 0.0) CHECK(v.minCoeff() > 0.0);  // circles above sqrt2 expand
  }
}

TEST_CASE("q remainder is quadratically small") {
  auto sp = flow_spectrum();
  auto grid = sp->grid();
  CHECK(q_remainder(zero_graph(grid), *sp).cwiseAbs().maxCoeff() < 1e-10);

  // Richardson: ||Q(eps u)|| / ||Q(eps u / 2)|| -> 4
  double prev = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double eps = 4e-2 / (1 << i);
    const double q = grid->norm(q_remainder(make_graph(grid, cos_mode(*grid, 2, eps)), *sp));
    if (i > 0) {
      const double ratio = prev / q;
      CHECK(ratio > 3.6);
      CHECK(ratio < 4.4);
    }
    prev = q;
  }

  // constant graphs: Q(eps) = M(eps) - eps with the radial closed form
  for (double eps : {0.05, -0.05}) {
    const Vec q = q_remainder(make_graph(grid, Vec::Constant(grid->nodes(), eps)), *sp);
    const double expected = (-1.0 / (kR + eps) + 0.5 * (kR + eps)) - eps;
    CHECK(q.maxCoeff() == doctest::Approx(expected).epsilon(1e-10));
    CHECK(q.minCoeff() == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("distance and the small-graph cutoff") {
  auto sp = flow_spectrum();
  auto grid = sp->grid();
  const double c0 = 0.2 * kR;
  CHECK(distance(zero_graph(grid), c0) == 0.0);
  const double cnorm = 2.3215273935524418;  // sqrt(2 pi sqrt2 e^{-1/2})
  CHECK(distance(make_graph(grid, Vec::Constant(grid->nodes(), 0.01)), c0) ==
        doctest::Approx(0.01 * cnorm).epsilon(1e-12));
  // beyond the proxy cutoff the sentinel fires
  CHECK(std::isinf(distance(make_graph(grid, Vec::Constant(grid->nodes(), 0.3)), c0)));
  CHECK(std::isinf(distance(make_graph(grid, cos_mode(*grid, 6, 0.05)), c0)));
}

TEST_CASE("stationarity of the shrinker under stepping") {
  auto sp = flow_spectrum();
  FlowParams params;
  FlowState st = make_state(zero_graph(sp->grid()), 0.0, params);
  const FlowState one = step(st, *sp, params, 1e-3);
  CHECK(one.graph.heights.cwiseAbs().maxCoeff() < 1e-12);
  const Trajectory traj = run(zero_graph(sp->grid()), sp, params, 1.0, 0.1);
  CHECK(traj.states.back().graph.heights.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(traj.states.back().distance < 1e-12);
}

TEST_CASE("single step matches the radial ODE to fifth order") {
  auto sp = flow_spectrum();
  FlowParams params;
  const double c = 0.1;
  FlowState st = make_state(make_graph(sp->grid(), Vec::Constant(sp->grid()->nodes(), c)),
                            0.0, params);
  double prev_err = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double h = 0.02 / (1 << i);
    const FlowState next = step(st, *sp, params, h);
    const double expected = exact_radius(kR + c, h) - kR;
    const double err = std::abs(next.graph.heights.maxCoeff() - expected);
    if (i > 0) CHECK(err < prev_err / 20.0);  // 5th-order local error
    prev_err = err;
  }
}

TEST_CASE("constant-mode run follows the exact radial solution") {
  auto sp = flow_spectrum();
  FlowParams params;
  const double c = 1e-3;
  const Trajectory traj =
      run(make_graph(sp->grid(), Vec::Constant(sp->grid()->nodes(), c)), sp, params, 2.0, 0.1);
  for (const FlowState& st : traj.states) {
    const double expected = exact_radius(kR + c, st.tau) - kR;
    CHECK(st.graph.heights.maxCoeff() == doctest::Approx(expected).epsilon(1e-9));
  }
  // D grows like e^tau, with the nonlinear correction of the closed form
  const TrajectorySeries s = series(traj);
  const double ratio = series_distance_at(s, 2.0) / series_distance_at(s, 1.0);
  const double exact_ratio =
      (exact_radius(kR + c, 2.0) - kR) / (exact_radius(kR + c, 1.0) - kR);
  CHECK(ratio == doctest::Approx(exact_ratio).epsilon(1e-8));
  CHECK(ratio == doctest::Approx(std::exp(1.0)).epsilon(0.01));
}

TEST_CASE("runs leave the regime when the graph grows past c0") {
  auto sp = flow_spectrum();
  FlowParams params;
  // start just below the cutoff: the constant mode grows and exits quickly
  const double c0 = effective_c0(params, sp->grid()->shrinker());
  const Trajectory traj = run(
      make_graph(sp->grid(), Vec::Constant(sp->grid()->nodes(), 0.9 * c0)), sp, params, 3.0, 0.05);
  CHECK(traj.log.halted_infinite);
  CHECK(std::isinf(traj.states.back().distance));
  CHECK(traj.states.back().tau < 3.0);
}

TEST_CASE("excess decreases along accepted trajectories") {
  auto sp = flow_spectrum();
  FlowParams params;
  const Trajectory traj =
      run(make_graph(sp->grid(), cos_mode(*sp->grid(), 2, 5e-3)), sp, params, 1.0, 0.01);
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    CHECK(traj.states[i].excess <= traj.states[i - 1].excess + 1e-8);
  }
  CHECK(traj.log.rejected == 0);
}

TEST_CASE("step rejection and stiffness") {
  auto sp = flow_spectrum();
  FlowParams params;
  // content at the top of the band makes a too-large step amplify the excess
  FlowState st = make_state(make_graph(sp->grid(), cos_mode(*sp->grid(), 31, 2e-3)), 0.0, params);
  const FlowState halved = step(st, *sp, params, 7e-3);
  CHECK(halved.tau == doctest::Approx(3.5e-3).epsilon(1e-12));

  FlowParams impossible;
  impossible.excess_tol = -1.0;  // no step can decrease the excess this much
  impossible.max_rejects = 2;
  FlowState st2 = make_state(make_graph(sp->grid(), cos_mode(*sp->grid(), 2, 1e-3)), 0.0, impossible);
  CHECK_THROWS_AS(step(st2, *sp, impossible, 1e-3), StiffnessError);
}

TEST_CASE("linearization dominates at small amplitude") {
  auto sp = flow_spectrum();
  FlowParams params;
  const double eps = 1e-3;
  const Trajectory traj =
      run(make_graph(sp->grid(), cos_mode(*sp->grid(), 2, eps)), sp, params, 3.0, 0.01);
  const TrajectorySeries s = series(traj);
  const double D0 = s.dist(0);
  for (double tau : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    const double predicted = D0 * std::exp(-tau);  // mu = 1 eigen-decay
    CHECK(std::abs(series_distance_at(s, tau) / predicted - 1.0) < 0.05);
  }
  // projected k=2 coefficient decays like e^{-s} with relative error O(eps)
  const ModeVector a0 = project(traj.states.front().graph.heights, sp);
  const ModeVector a2 = project(distance_at(traj, 0.2) > 0 ? traj.states[20].graph.heights
                                                           : traj.states[20].graph.heights,
                                sp);
  CHECK(std::abs(a2.a(3) / a0.a(3) - std::exp(-0.2)) < 1e-5);

  // decay order at tau = 1 sits in the linear window
  const double N = decay_order(traj, 1.0);
  CHECK(N > 0.9);
  CHECK(N < 1.1);
}

TEST_CASE("monotonicity audit") {
  auto sp = flow_spectrum();
  FlowParams params;
  // the stationary trajectory has both sides zero
  {
    const Trajectory traj = run(zero_graph(sp->grid()), sp, params, 0.05, 0.01);
    const MonotonicityReport rep = monotonicity_audit(traj);
    CHECK(rep.max_defect < 1e-10);
  }
  // round-circle trajectory: both sides follow the 1-D closed form
  {
    const Trajectory traj = run(
        make_graph(sp->grid(), Vec::Constant(sp->grid()->nodes(), 0.1)), sp, params, 0.5, 0.005);
    const MonotonicityReport rep = monotonicity_audit(traj);
    CHECK(rep.max_defect < 1e-6);
    CHECK(rep.max_dissipation > 0.0);
  }
  // wavy trajectory at dtau = 1e-3 sampling
  {
    const Trajectory traj =
        run(make_graph(sp->grid(), cos_mode(*sp->grid(), 2, 1e-3)), sp, params, 0.05, 1e-3);
    const MonotonicityReport rep = monotonicity_audit(traj);
    CHECK(rep.max_defect < 1e-4);
  }
  CHECK_THROWS_AS(monotonicity_audit(Trajectory{}), std::invalid_argument);
}

TEST_CASE("decay order on synthetic eigen-decay data") {
  auto sp = flow_spectrum();
  ModeVector a{sp, Vec::Zero(sp->size())};
  a.a(3) = 1e-3;  // mu = 1
  const Trajectory decay = helpers::linear_trajectory(a, 2.5, 0.05);
  CHECK(decay_order(decay, 0.5) == doctest::Approx(1.0).epsilon(1e-6));

  ModeVector g{sp, Vec::Zero(sp->size())};
  g.a(0) = 1e-4;  // mu = -1, growing
  const Trajectory grow = helpers::linear_trajectory(g, 2.5, 0.05);
  CHECK(decay_order(grow, 0.5) == doctest::Approx(-1.0).epsilon(1e-6));

  CHECK_THROWS_AS(decay_order(decay, 2.0), std::domain_error);  // tau+1 beyond span
  const Trajectory zero = helpers::linear_trajectory(ModeVector{sp, Vec::Zero(sp->size())}, 2.0, 0.1);
  CHECK_THROWS_AS(decay_order(zero, 0.5), std::domain_error);
}

TEST_CASE("semi-continuity audit records a stable empirical constant") {
  auto sp = flow_spectrum();
  ModeVector a{sp, Vec::Zero(sp->size())};
  a.a(3) = 1e-3;
  const Trajectory decay = helpers::linear_trajectory(a, 2.5, 0.05);
  const SemiContinuityReport rep = lemma25_audit(decay, 0.05);
  CHECK(rep.windows_checked > 0);
  CHECK(rep.empirical_C0 == doctest::Approx(1.0).epsilon(1e-9));  // decaying: sup at s=0

  ModeVector g{sp, Vec::Zero(sp->size())};
  g.a(0) = 1e-4;
  const Trajectory grow = helpers::linear_trajectory(g, 2.5, 0.05);
  const SemiContinuityReport rg = lemma25_audit(grow, 0.05);
  CHECK(rg.empirical_C0 == doctest::Approx(std::exp(1.0)).epsilon(1e-6));

  // refinement stability
  const Trajectory fine = helpers::linear_trajectory(a, 2.5, 0.025);
  const SemiContinuityReport rf = lemma25_audit(fine, 0.05);
  CHECK(std::abs(rf.empirical_C0 - rep.empirical_C0) < 1e-6);
}

TEST_CASE("unstable fraction") {
  auto sp = flow_spectrum();
  auto grid = sp->grid();
  CHECK(unstable_fraction(zero_graph(grid), *sp) == 0.0);
  CHECK(unstable_fraction(make_graph(grid, Vec::Constant(grid->nodes(), 1e-3)), *sp) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unstable_fraction(make_graph(grid, cos_mode(*grid, 2, 1e-3)), *sp) ==
        doctest::Approx(0.0).epsilon(1e-10));
}
