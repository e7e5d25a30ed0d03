#include "shrinkflow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

namespace {

constexpr double kPi = std::numbers::pi;

double closed_form_mu(int n, int k) {
  return (n == 1) ? 0.5 * k * k - 1.0 : 0.25 * k * (k + 1) - 1.0;
}

WeylFit fit_weyl(const Vec& mu, int n) {
  WeylFit fit;
  fit.m = 0.5 * n + 0.5;
  fit.offset = 2.0;
  double C1 = 0.0;
  int below_one = 0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double N = mu(j) + fit.offset;
    if (N <= 1.0) {
      ++below_one;
      continue;
    }
    C1 = std::max(C1, (j + 1) / std::pow(N, fit.m));
  }
  // as N -> 1+ the bound must still cover the eigenvalues at or below 1
  C1 = std::max(C1, static_cast<double>(below_one));
  fit.C1 = C1;
  return fit;
}

}  // namespace

SpectrumPtr build_spectrum(const Shrinker& shrinker, int levels, GridPtr grid) {
  if (levels < 4) throw std::invalid_argument("spectrum cutoff must be >= 4 levels");
  if (!grid) {
    if (shrinker.n == 1) {
      grid = Grid::circle(std::max(256, 4 * levels));
    } else {
      grid = Grid::sphere(levels + 7);
    }
  }
  if (grid->shrinker().n != shrinker.n)
    throw DimensionError("grid shrinker does not match the requested shrinker");
  if (levels - 1 > grid->band())
    throw InsufficientSpectrumError("grid band does not resolve the requested cutoff");

  auto s = std::shared_ptr<Spectrum>(new Spectrum());
  s->grid_ = grid;
  s->levels_ = levels;

  // The grid's reference modes are already ordered level-major with cos
  // before sin, which matches ascending mu with the documented tie-breaking.
  Eigen::Index M = 0;
  for (int k = 0; k < levels; ++k) M += (shrinker.n == 1) ? (k == 0 ? 1 : 2) : (2 * k + 1);

  s->eigenvalues_.resize(M);
  s->level_.resize(M);
  s->labels_.resize(M);
  s->basis_.resize(grid->nodes(), M);
  s->analysis_.resize(M, grid->nodes());

  const double R = shrinker.radius;
  const double rho = grid->rho_factor();
  const Vec& w = grid->weights();

  for (Eigen::Index i = 0; i < M; ++i) {
    const int k = grid->mode_level()(i);
    s->eigenvalues_(i) = closed_form_mu(shrinker.n, k);
    s->level_(i) = k;
    s->labels_[i] = grid->mode_labels()[i];
    // Gaussian norm of the reference mode:
    //   circle: ||1||^2 = rho 2 pi R, ||cos k||^2 = ||sin k||^2 = rho pi R
    //   sphere: reference Y is unit-sphere orthonormal, ||Y||^2 = rho R^2
    double norm_sq;
    if (shrinker.n == 1) {
      norm_sq = (k == 0) ? rho * 2.0 * kPi * R : rho * kPi * R;
    } else {
      norm_sq = rho * R * R;
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    s->basis_.col(i) = scale * grid->basis_values().col(i);
    s->analysis_.row(i) =
        (s->basis_.col(i).array() * w.array() * rho).transpose();
  }
  s->weyl_ = fit_weyl(s->eigenvalues_, shrinker.n);
  return s;
}

Vec Spectrum::filter(const Eigen::Ref<const Vec>& u) const {
  if (u.size() != grid_->nodes()) throw DimensionError("grid function size mismatch in filter");
  return basis_ * (analysis_ * u);
}

Vec drift_term(const Eigen::Ref<const Vec>& u, const Grid& grid) {
  const Points grad = grid.ambient_gradient(u);
  Vec out(grid.nodes());
  for (Eigen::Index j = 0; j < grid.nodes(); ++j) {
    out(j) = grid.positions().row(j).dot(grad.row(j));
  }
  return out;
}

Vec apply_L(const Eigen::Ref<const Vec>& u, const Spectrum& spectrum) {
  const Grid& grid = *spectrum.grid();
  if (u.size() != grid.nodes()) throw DimensionError("grid function size mismatch in apply_L");
  const Shrinker& sh = grid.shrinker();
  const double R2 = sh.radius * sh.radius;
  const Grid::Derivatives d = grid.differentiate(u);
  const Vec lap = d.lap_ref / R2;
  return lap - 0.5 * drift_term(u, grid) +
         (sh.second_fundamental_norm_sq + 0.5) * u;
}

ModeVector project(const Eigen::Ref<const Vec>& u, SpectrumPtr spectrum) {
  if (!spectrum) throw std::invalid_argument("null spectrum");
  if (u.size() != spectrum->grid()->nodes())
    throw DimensionError("grid function size mismatch in project");
  return ModeVector{spectrum, spectrum->analysis() * u};
}

Vec synthesize(const ModeVector& a) {
  if (!a.spectrum) throw std::invalid_argument("mode vector without spectrum");
  if (a.a.size() != a.spectrum->size())
    throw DimensionError("coefficient size mismatch in synthesize");
  return a.spectrum->basis() * a.a;
}

int weyl_count(const Spectrum& spectrum, double N) {
  const Vec& mu = spectrum.eigenvalues();
  if (N > spectrum.max_eigenvalue())
    throw InsufficientSpectrumError("weyl_count beyond the resolved spectrum");
  int count = 0;
  for (Eigen::Index j = 0; j < mu.size(); ++j)
    if (mu(j) <= N + 1e-12) ++count;
  return count;
}

double certified_growth_delta(const Spectrum& spectrum) {
  const Vec& mu = spectrum.eigenvalues();
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double am = std::abs(mu(j));
    if (am > 1e-12) smallest = std::min(smallest, am);
  }
  return 0.5 * smallest;
}

double certified_dichotomy_delta(const Spectrum& spectrum) {
  // Minimize max(I(t+1), I(t-1)) / I(t) over unit mode-vector weights: a
  // linear program whose optimum concentrates on at most two modes, so
  // enumerate singles and opposite-sign pairs. For the equalized pair
  // (alpha = -mu_a > 0, beta = mu_b > 0) the squared ratio is
  //   (sinh(2 beta) e^{2 alpha} + sinh(2 alpha) e^{-2 beta}) /
  //   (sinh(2 beta) + sinh(2 alpha)).
  const Vec& mu = spectrum.eigenvalues();
  std::vector<double> neg, pos;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double m = mu(j);
    if (std::abs(m) < 1e-12) continue;
    if (std::abs(m) > 150.0) continue;  // far modes can never realize the min
    if (m < 0) neg.push_back(-m);
    else pos.push_back(m);
  }
  std::sort(neg.begin(), neg.end());
  std::sort(pos.begin(), pos.end());
  neg.erase(std::unique(neg.begin(), neg.end()), neg.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

  // v below is the squared ratio max(I(1), I(-1))^2 / I(0)^2 at the optimum.
  double best_sq = std::numeric_limits<double>::infinity();
  for (double alpha : neg) best_sq = std::min(best_sq, std::exp(2.0 * alpha));
  for (double beta : pos) best_sq = std::min(best_sq, std::exp(2.0 * beta));
  for (double alpha : neg) {
    for (double beta : pos) {
      const double sa = std::sinh(2.0 * alpha), sb = std::sinh(2.0 * beta);
      const double v = (sb * std::exp(2.0 * alpha) + sa * std::exp(-2.0 * beta)) / (sb + sa);
      best_sq = std::min(best_sq, v);
    }
  }
  return 0.5 * std::log(best_sq);
}

}  // namespace shrinkflow
