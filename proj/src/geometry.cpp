#include "shrinkflow/geometry.hpp"

#include <cmath>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

RadialGraph make_graph(GridPtr grid, Vec heights) {
  if (!grid) throw std::invalid_argument("null grid");
  if (heights.size() != grid->nodes())
    throw DimensionError("height samples do not match the grid");
  return RadialGraph{std::move(grid), std::move(heights)};
}

RadialGraph zero_graph(GridPtr grid) {
  if (!grid) throw std::invalid_argument("null grid");
  Vec u = Vec::Zero(grid->nodes());
  return RadialGraph{std::move(grid), std::move(u)};
}

GraphGeometry graph_geometry(const RadialGraph& g) {
  if (!g.heights.allFinite())
    throw std::invalid_argument("non-finite height samples");
  const Grid& grid = *g.grid;
  const double R = grid.shrinker().radius;
  const Eigen::Index N = grid.nodes();

  const Grid::Derivatives d = grid.differentiate(g.heights);
  // Use the raw samples for r itself so constants are exact; derivatives come
  // from the band-limited interpolant.
  const Vec r = g.heights.array() + R;
  if ((r.array() <= 0.0).any())
    throw DegenerateGraphError("radial graph has r <= 0");

  GraphGeometry out;
  out.positions.resize(N, 3);
  out.normal.resize(N, 3);
  out.mean_curvature.resize(N);
  out.eta.resize(N);
  out.measure.resize(N);
  out.graph_factor.resize(N);

  if (grid.kind() == Grid::Kind::Circle) {
    for (Eigen::Index j = 0; j < N; ++j) {
      const double th = grid.theta()(j);
      const double rr = r(j), r1 = d.d1(j), r2 = d.d2(j);
      const double W2 = rr * rr + r1 * r1;
      const double W = std::sqrt(W2);
      const Eigen::Vector3d om(std::cos(th), std::sin(th), 0.0);
      const Eigen::Vector3d et(-std::sin(th), std::cos(th), 0.0);
      out.positions.row(j) = (rr * om).transpose();
      out.normal.row(j) = ((rr * om - r1 * et) / W).transpose();
      out.mean_curvature(j) = (rr * rr + 2.0 * r1 * r1 - rr * r2) / (W2 * W);
      out.eta(j) = rr * rr / W;
      out.measure(j) = grid.weights()(j) * (W / R);
      out.graph_factor(j) = W / rr;
    }
  } else {
    for (Eigen::Index j = 0; j < N; ++j) {
      const double s = grid.node_sin_colat()(j);
      const double x = grid.node_cos_colat()(j);
      const double lam = grid.node_lon()(j);
      const double rr = r(j);
      const double ft = d.d1(j), fl = d.dl(j);
      const double ftt = d.d2(j), ftl = d.d1l(j), fll = d.dll(j);
      // covariant Hessian on the unit sphere, ghat = diag(1, sin^2)
      const double Htt = ftt;
      const double Htl = ftl - (x / s) * fl;
      const double Hll = fll + s * x * ft;
      const double grad2 = ft * ft + (fl / s) * (fl / s);
      const double W2 = rr * rr + grad2;
      const double W = std::sqrt(W2);
      const double hess_gg = Htt * ft * ft + 2.0 * Htl * ft * fl / (s * s) +
                             Hll * (fl / (s * s)) * (fl / (s * s));
      const double lap_cov = Htt + Hll / (s * s);
      const double H = (2.0 * rr * rr + 2.0 * grad2 - rr * lap_cov -
                        (rr * rr * grad2 + 2.0 * grad2 * grad2 - rr * hess_gg) / W2) /
                       (rr * rr * W);
      const Eigen::Vector3d om(s * std::cos(lam), s * std::sin(lam), x);
      const Eigen::Vector3d et(x * std::cos(lam), x * std::sin(lam), -s);
      const Eigen::Vector3d el(-std::sin(lam), std::cos(lam), 0.0);
      const Eigen::Vector3d grad_hat = ft * et + (fl / s) * el;  // unit-sphere gradient
      out.positions.row(j) = (rr * om).transpose();
      out.normal.row(j) = ((rr * om - grad_hat) / W).transpose();
      out.mean_curvature(j) = H;
      out.eta(j) = rr * rr / W;
      out.measure(j) = grid.weights()(j) * (rr * W / (R * R));
      out.graph_factor(j) = W / rr;
    }
  }
  return out;
}

double gaussian_area(const RadialGraph& g) {
  const GraphGeometry geo = graph_geometry(g);
  const int n = g.grid->shrinker().n;
  double F = 0.0;
  for (Eigen::Index j = 0; j < geo.positions.rows(); ++j) {
    F += gaussian_weight_sq(geo.positions.row(j).squaredNorm(), n) * geo.measure(j);
  }
  return F;
}

double excess(const RadialGraph& g) {
  return gaussian_area(g) - g.grid->shrinker().gaussian_area;
}

GraphNorms graph_norms(const RadialGraph& g) {
  const Grid& grid = *g.grid;
  const double R = grid.shrinker().radius;
  const Grid::Derivatives d = grid.differentiate(g.heights);
  GraphNorms n;
  n.sup_u = g.heights.cwiseAbs().maxCoeff();
  if (grid.kind() == Grid::Kind::Circle) {
    n.sup_grad = d.d1.cwiseAbs().maxCoeff() / R;
    n.sup_hess = d.d2.cwiseAbs().maxCoeff() / (R * R);
  } else {
    double sg = 0.0, sh = 0.0;
    for (Eigen::Index j = 0; j < grid.nodes(); ++j) {
      const double s = grid.node_sin_colat()(j);
      const double x = grid.node_cos_colat()(j);
      const double ft = d.d1(j), fl = d.dl(j);
      const double Htt = d.d2(j);
      const double Htl = d.d1l(j) - (x / s) * fl;
      const double Hll = d.dll(j) + s * x * ft;
      sg = std::max(sg, std::sqrt(ft * ft + (fl / s) * (fl / s)) / R);
      const double h2 = Htt * Htt + 2.0 * (Htl / s) * (Htl / s) +
                        (Hll / (s * s)) * (Hll / (s * s));
      sh = std::max(sh, std::sqrt(h2) / (R * R));
    }
    n.sup_grad = sg;
    n.sup_hess = sh;
  }
  return n;
}

}  // namespace shrinkflow
