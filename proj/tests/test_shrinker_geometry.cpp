#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shrinkflow/errors.hpp"
#include "shrinkflow/geometry.hpp"
#include "shrinkflow/shrinker.hpp"

using namespace shrinkflow;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kF_circle = 1.5203469010662808;  // sqrt(2 pi / e)
constexpr double kF_sphere = 1.4715177646857693;  // 4 / e

// closed-form Gaussian area of a round circle of radius r in the plane
double round_circle_F(double r) {
  return std::sqrt(kPi) * r * std::exp(-0.25 * r * r);
}
}  // namespace

TEST_CASE("gaussian weight closed forms") {
  CHECK(gaussian_weight(Eigen::Vector3d::Zero(), 1) ==
        doctest::Approx(0.28209479177387814).epsilon(1e-14));
  CHECK(gaussian_weight(Eigen::Vector3d::Zero(), 2) ==
        doctest::Approx(0.07957747154594767).epsilon(1e-14));
  const Eigen::Vector3d x(std::sqrt(2.0), 0.0, 0.0);
  CHECK(gaussian_weight(x, 1) ==
        doctest::Approx(0.28209479177387814 * std::exp(-0.5)).epsilon(1e-14));
  // strictly positive and decreasing in |x|
  CHECK(gaussian_weight(Eigen::Vector3d(3, 0, 0), 1) <
        gaussian_weight(Eigen::Vector3d(2, 0, 0), 1));
  CHECK(gaussian_weight(Eigen::Vector3d(50, 0, 0), 2) > 0.0);
}

TEST_CASE("round shrinker invariants") {
  for (int n : {1, 2}) {
    const Shrinker s = round_shrinker(n);
    CHECK(s.radius * s.radius == doctest::Approx(2.0 * n).epsilon(1e-15));
    CHECK(s.second_fundamental_norm_sq == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK(round_shrinker(1).gaussian_area == doctest::Approx(kF_circle).epsilon(1e-14));
  CHECK(round_shrinker(2).gaussian_area == doctest::Approx(kF_sphere).epsilon(1e-14));
  CHECK_THROWS_AS(round_shrinker(3), UnsupportedGeometryError);
  CHECK_THROWS_AS(round_shrinker(0), UnsupportedGeometryError);
}

TEST_CASE("grid weights sum to the intrinsic area") {
  auto c = Grid::circle(256);
  CHECK(c->weights().sum() ==
        doctest::Approx(2.0 * kPi * std::sqrt(2.0)).epsilon(1e-12));
  auto s = Grid::sphere(15);
  CHECK(s->weights().sum() == doctest::Approx(16.0 * kPi).epsilon(1e-12));
}

TEST_CASE("gaussian area of the shrinkers by quadrature") {
  CHECK(gaussian_area(zero_graph(Grid::circle(256))) ==
        doctest::Approx(kF_circle).epsilon(1e-12));
  CHECK(gaussian_area(zero_graph(Grid::sphere(15))) ==
        doctest::Approx(kF_sphere).epsilon(1e-12));
  // refinement study: doubling the grid moves the value by < 1e-10 relative
  const double a1 = gaussian_area(zero_graph(Grid::circle(256)));
  const double a2 = gaussian_area(zero_graph(Grid::circle(512)));
  CHECK(std::abs(a2 - a1) / a1 < 1e-10);
  const double b1 = gaussian_area(zero_graph(Grid::sphere(15)));
  const double b2 = gaussian_area(zero_graph(Grid::sphere(31)));
  CHECK(std::abs(b2 - b1) / b1 < 1e-10);
}

TEST_CASE("gaussian area rejects non-finite samples") {
  auto grid = Grid::circle(64);
  Vec u = Vec::Zero(grid->nodes());
  u(3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(gaussian_area(make_graph(grid, u)), std::invalid_argument);
}

TEST_CASE("excess of round circles matches the closed form") {
  auto grid = Grid::circle(256);
  CHECK(excess(zero_graph(grid)) == doctest::Approx(0.0).epsilon(1e-13));
  for (double c : {0.1, -0.1}) {
    const RadialGraph g = make_graph(grid, Vec::Constant(grid->nodes(), c));
    const double expected = round_circle_F(std::sqrt(2.0) + c) - kF_circle;
    CHECK(excess(g) == doctest::Approx(expected).epsilon(1e-12));
    // rounder circles away from sqrt2 have smaller Gaussian area
    CHECK(excess(g) < 0.0);
  }
}

TEST_CASE("excess is quadratically small in the perturbation") {
  auto grid = Grid::circle(256);
  Vec mode(grid->nodes());
  for (Eigen::Index j = 0; j < grid->nodes(); ++j)
    mode(j) = std::cos(2.0 * grid->theta()(j));
  double prev = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double eps = 1e-2 / (1 << i);
    const double e = std::abs(excess(make_graph(grid, eps * mode)));
    CHECK(e < 10.0 * eps * eps);  // |A(u)| <= C ||u||^2
    if (i > 0) CHECK(e == doctest::Approx(prev / 4.0).epsilon(0.05));
    prev = e;
  }
}

TEST_CASE("graph geometry of round configurations") {
  auto c = Grid::circle(128);
  const GraphGeometry g0 = graph_geometry(zero_graph(c));
  CHECK(g0.mean_curvature.maxCoeff() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(g0.mean_curvature.minCoeff() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // shrinker identity H - <x,nu>/2 = 0
  CHECK((g0.mean_curvature - 0.5 * g0.eta).cwiseAbs().maxCoeff() < 1e-10);

  const double cc = 0.3;
  const GraphGeometry gc = graph_geometry(make_graph(c, Vec::Constant(c->nodes(), cc)));
  CHECK(gc.mean_curvature.maxCoeff() == doctest::Approx(1.0 / (std::sqrt(2.0) + cc)).epsilon(1e-10));

  auto s = Grid::sphere(15);
  const GraphGeometry s0 = graph_geometry(zero_graph(s));
  CHECK(s0.mean_curvature.maxCoeff() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(s0.mean_curvature.minCoeff() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK((s0.mean_curvature - 0.5 * s0.eta).cwiseAbs().maxCoeff() < 1e-10);
  const GraphGeometry sc = graph_geometry(make_graph(s, Vec::Constant(s->nodes(), 0.25)));
  CHECK(sc.mean_curvature.maxCoeff() == doctest::Approx(2.0 / 2.25).epsilon(1e-10));
}

TEST_CASE("offset round surfaces keep constant mean curvature") {
  // a circle of radius sqrt2 centered at p is still a radial graph; its
  // curvature must stay 1/sqrt2 at every node
  auto c = Grid::circle(128);
  const double R = std::sqrt(2.0);
  const Eigen::Vector2d p(0.05, -0.03);
  Vec u(c->nodes());
  for (Eigen::Index j = 0; j < c->nodes(); ++j) {
    const double th = c->theta()(j);
    const Eigen::Vector2d om(std::cos(th), std::sin(th));
    const double pw = p.dot(om);
    u(j) = pw + std::sqrt(R * R - (p.squaredNorm() - pw * pw)) - R;
  }
  const GraphGeometry gg = graph_geometry(make_graph(c, u));
  CHECK((gg.mean_curvature.array() - 1.0 / R).abs().maxCoeff() < 1e-9);

  // a sphere of radius 2 centered at q: H = 1 everywhere
  auto s = Grid::sphere(23);
  const Eigen::Vector3d q(0.05, -0.03, 0.08);
  Vec v(s->nodes());
  for (Eigen::Index j = 0; j < s->nodes(); ++j) {
    const Eigen::Vector3d om = s->positions().row(j).transpose() / 2.0;
    const double pw = q.dot(om);
    v(j) = pw + std::sqrt(4.0 - (q.squaredNorm() - pw * pw)) - 2.0;
  }
  const GraphGeometry sg = graph_geometry(make_graph(s, v));
  CHECK((sg.mean_curvature.array() - 1.0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("wavy circle curvature agrees with the parametric oracle") {
  auto c = Grid::circle(256);
  const double R = std::sqrt(2.0);
  auto rfun = [&](double th) { return R + 0.1 * std::cos(2.0 * th); };
  Vec u(c->nodes());
  for (Eigen::Index j = 0; j < c->nodes(); ++j) u(j) = rfun(c->theta()(j)) - R;
  const GraphGeometry gg = graph_geometry(make_graph(c, u));
  // oracle: kappa = (x'y'' - y'x'') / (x'^2 + y'^2)^{3/2} with finite
  // differences of the closed-form parametrization
  const double h = 1e-5;
  for (Eigen::Index j = 0; j < c->nodes(); j += 17) {
    const double th = c->theta()(j);
    auto X = [&](double t) { return Eigen::Vector2d(rfun(t) * std::cos(t), rfun(t) * std::sin(t)); };
    const Eigen::Vector2d d1 = (X(th + h) - X(th - h)) / (2.0 * h);
    const Eigen::Vector2d d2 = (X(th + h) - 2.0 * X(th) + X(th - h)) / (h * h);
    const double kappa = (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.squaredNorm(), 1.5);
    CHECK(gg.mean_curvature(j) == doctest::Approx(kappa).epsilon(1e-5));
  }
}

TEST_CASE("degenerate graphs are rejected") {
  auto c = Grid::circle(64);
  CHECK_THROWS_AS(graph_geometry(make_graph(c, Vec::Constant(c->nodes(), -2.0))),
                  DegenerateGraphError);
  CHECK_THROWS_AS(make_graph(c, Vec::Zero(10)), DimensionError);
}

TEST_CASE("graph norms") {
  auto c = Grid::circle(128);
  const GraphNorms n0 = graph_norms(make_graph(c, Vec::Constant(c->nodes(), 0.05)));
  CHECK(n0.sup_u == doctest::Approx(0.05).epsilon(1e-13));
  CHECK(n0.sup_grad < 1e-12);
  CHECK(n0.sup_hess < 1e-11);
  // u = eps cos(2 theta): |grad u| = eps k/R |sin|, |Hess| = eps k^2/R^2 |cos|
  Vec u(c->nodes());
  for (Eigen::Index j = 0; j < c->nodes(); ++j) u(j) = 0.01 * std::cos(2.0 * c->theta()(j));
  const GraphNorms n2 = graph_norms(make_graph(c, u));
  CHECK(n2.sup_u == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(n2.sup_grad == doctest::Approx(0.01 * 2.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(n2.sup_hess == doctest::Approx(0.01 * 4.0 / 2.0).epsilon(1e-10));
}
