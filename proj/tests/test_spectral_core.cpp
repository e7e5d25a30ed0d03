#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shrinkflow/errors.hpp"
#include "shrinkflow/spectrum.hpp"

using namespace shrinkflow;

TEST_CASE("closed-form eigenvalue lists") {
  auto s1 = build_spectrum(round_shrinker(1), 4);
  const double expect1[] = {-1.0, -0.5, -0.5, 1.0, 1.0, 3.5, 3.5};
  REQUIRE(s1->size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(s1->eigenvalues()(i) == doctest::Approx(expect1[i]).epsilon(1e-15));

  auto s2 = build_spectrum(round_shrinker(2), 4, Grid::sphere(12));
  const double expect2[] = {-1.0, -0.5, -0.5, -0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  REQUIRE(s2->size() == 16);
  for (int i = 0; i < 9; ++i) CHECK(s2->eigenvalues()(i) == doctest::Approx(expect2[i]).epsilon(1e-15));
  // level 3: mu = 2, multiplicity 7
  for (int i = 9; i < 16; ++i) CHECK(s2->eigenvalues()(i) == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(build_spectrum(round_shrinker(1), 3), std::invalid_argument);
}

TEST_CASE("orthonormality in the Gaussian inner product") {
  for (int n : {1, 2}) {
    auto sp = (n == 1) ? build_spectrum(round_shrinker(1), 16, Grid::circle(128))
                       : build_spectrum(round_shrinker(2), 8, Grid::sphere(12));
    const Mat G = sp->analysis() * sp->basis();
    const double err = (G - Mat::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    CHECK(err < 1e-10);
  }
}

TEST_CASE("eigen-residual of the spectrally applied operator") {
  auto s1 = build_spectrum(round_shrinker(1), 64, Grid::circle(256));
  for (Eigen::Index i = 0; i < s1->size(); ++i) {
    const Vec phi = s1->basis().col(i);
    const Vec r = apply_L(phi, *s1) + s1->eigenvalues()(i) * phi;
    CHECK(s1->grid()->norm(r) < 1e-8);
  }
  auto s2 = build_spectrum(round_shrinker(2), 10, Grid::sphere(17));
  for (Eigen::Index i = 0; i < s2->size(); ++i) {
    const Vec phi = s2->basis().col(i);
    const Vec r = apply_L(phi, *s2) + s2->eigenvalues()(i) * phi;
    CHECK(s2->grid()->norm(r) < 1e-8);
  }
}

TEST_CASE("drift term vanishes on the round shrinker") {
  auto c = Grid::circle(128);
  auto s = Grid::sphere(12);
  Vec uc(c->nodes()), us(s->nodes());
  for (Eigen::Index j = 0; j < c->nodes(); ++j)
    uc(j) = std::sin(3.0 * c->theta()(j)) + 0.5 * std::cos(c->theta()(j));
  for (Eigen::Index j = 0; j < s->nodes(); ++j)
    us(j) = s->positions()(j, 2) * 0.3 + 0.1 * s->positions()(j, 0);
  CHECK(drift_term(uc, *c).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(drift_term(us, *s).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("apply_L on explicit functions") {
  auto sp = build_spectrum(round_shrinker(1), 16, Grid::circle(128));
  const auto& grid = *sp->grid();
  // constant: L 1 = 1 (mu = -1)
  const Vec ones = Vec::Ones(grid.nodes());
  CHECK((apply_L(ones, *sp) - ones).cwiseAbs().maxCoeff() < 1e-10);
  // cos(2 theta): L u = -u (mu = 1)
  Vec u(grid.nodes());
  for (Eigen::Index j = 0; j < grid.nodes(); ++j) u(j) = std::cos(2.0 * grid.theta()(j));
  CHECK((apply_L(u, *sp) + u).cwiseAbs().maxCoeff() < 1e-10);
  // linearity at zero
  CHECK(apply_L(Vec::Zero(grid.nodes()), *sp).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projection, synthesis and Plancherel") {
  auto sp = build_spectrum(round_shrinker(1), 16, Grid::circle(128));
  // u = 3 phi_2
  {
    Vec u = 3.0 * sp->basis().col(2);
    const ModeVector a = project(u, sp);
    CHECK(a.a(2) == doctest::Approx(3.0).epsilon(1e-13));
    for (Eigen::Index i = 0; i < a.a.size(); ++i) {
      if (i != 2) CHECK(std::abs(a.a(i)) < 1e-10);
    }
  }
  // u = phi_1 + phi_4
  {
    Vec u = sp->basis().col(0) + sp->basis().col(3);
    const ModeVector a = project(u, sp);
    CHECK(a.a(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.a(3) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // random band-limited round trip and Plancherel against quadrature
  std::srand(7);
  Vec coeff = Vec::Random(sp->size());
  ModeVector a{sp, coeff};
  const Vec u = synthesize(a);
  const ModeVector back = project(u, sp);
  CHECK((back.a - coeff).cwiseAbs().maxCoeff() < 1e-10);
  const double plancherel = coeff.squaredNorm();
  const double quad = sp->grid()->inner(u, u);
  CHECK(std::abs(plancherel - quad) < 1e-10);
}

TEST_CASE("finite-difference oracle reproduces the circle spectrum") {
  auto sp = build_spectrum(round_shrinker(1), 8);
  const Eigen::VectorXd fd = oracles::circle_fd_eigenvalues(512, 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(fd(i) - sp->eigenvalues()(i)) < 1e-4);
  }
}

TEST_CASE("finite-difference oracle reproduces the sphere spectrum") {
  auto sp = build_spectrum(round_shrinker(2), 5, Grid::sphere(12));
  const Eigen::VectorXd fd = oracles::sphere_fd_eigenvalues(800, 3, 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(fd(i) - sp->eigenvalues()(i)) < 1e-4);
  }
}

TEST_CASE("weyl counting") {
  auto sp = build_spectrum(round_shrinker(1), 16);
  CHECK(weyl_count(*sp, 1.0) == 5);
  CHECK(weyl_count(*sp, 0.0) == 3);
  CHECK(weyl_count(*sp, -1.5) == 0);
  CHECK_THROWS_AS(weyl_count(*sp, 1e6), InsufficientSpectrumError);
  // the stored fit bounds the shifted counting function over the range
  const WeylFit fit = sp->weyl();
  CHECK(fit.m == doctest::Approx(1.0));
  for (Eigen::Index j = 0; j < sp->size(); ++j) {
    const double N = sp->eigenvalues()(j) + fit.offset;
    if (N <= 1.0) continue;
    CHECK(static_cast<double>(j + 1) <= fit.C1 * std::pow(N, fit.m) + 1e-12);
  }
  auto sp2 = build_spectrum(round_shrinker(2), 8, Grid::sphere(12));
  CHECK(sp2->weyl().m == doctest::Approx(1.5));
  for (Eigen::Index j = 0; j < sp2->size(); ++j) {
    const double N = sp2->eigenvalues()(j) + sp2->weyl().offset;
    if (N <= 1.0) continue;
    CHECK(static_cast<double>(j + 1) <= sp2->weyl().C1 * std::pow(N, sp2->weyl().m) + 1e-12);
  }
}

TEST_CASE("certified deltas from the closed-form spectra") {
  auto s1 = build_spectrum(round_shrinker(1), 16);
  auto s2 = build_spectrum(round_shrinker(2), 8, Grid::sphere(12));
  CHECK(certified_growth_delta(*s1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(certified_growth_delta(*s2) == doctest::Approx(0.25).epsilon(1e-14));
  // exact two-mode worst cases (pair (1/2,1) on the circle, (1/2,1/2) on the sphere)
  CHECK(certified_dichotomy_delta(*s1) ==
        doctest::Approx(0.36766283202775961).epsilon(1e-12));
  CHECK(certified_dichotomy_delta(*s2) ==
        doctest::Approx(0.21689041524151359).epsilon(1e-12));
}

TEST_CASE("dimension mismatches are reported") {
  auto sp = build_spectrum(round_shrinker(1), 8, Grid::circle(64));
  CHECK_THROWS_AS(apply_L(Vec::Zero(10), *sp), DimensionError);
  CHECK_THROWS_AS(project(Vec::Zero(10), sp), DimensionError);
  CHECK_THROWS_AS(synthesize(ModeVector{sp, Vec::Zero(3)}), DimensionError);
}
