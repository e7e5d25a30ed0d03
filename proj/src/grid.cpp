#include "shrinkflow/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shrinkflow/errors.hpp"
#include "shrinkflow/shrinker.hpp"

namespace shrinkflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre polynomial value and derivative via the three-term recurrence.
void legendre_pair(int n, double x, double& pn, double& pn1) {
  double p0 = 1.0, p1 = x;
  if (n == 0) { pn = p0; pn1 = 0.0; return; }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
}

}  // namespace

void gauss_legendre(int n, Vec& nodes, Vec& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pn = 0.0, pm = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, pn, pm);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_pair(n, x, pn, pm);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    nodes(n - 1 - i) = x;  // ascending order
    weights(n - 1 - i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

std::shared_ptr<const Grid> Grid::circle(int nodes, int band) {
  if (nodes < 16) throw std::invalid_argument("circle grid needs >= 16 nodes");
  if (band <= 0) band = nodes / 2 - 1;
  if (band > nodes / 2 - 1) {
    throw std::invalid_argument("circle band exceeds the alias-free limit nodes/2 - 1");
  }
  auto g = std::shared_ptr<Grid>(new Grid());
  g->shrinker_ = round_shrinker(1);
  g->kind_ = Kind::Circle;
  g->band_ = band;
  const double R = g->shrinker_.radius;

  g->theta_.resize(nodes);
  g->positions_.resize(nodes, 3);
  g->weights_.resize(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double th = 2.0 * kPi * j / nodes;
    g->theta_(j) = th;
    g->positions_.row(j) << R * std::cos(th), R * std::sin(th), 0.0;
    g->weights_(j) = R * 2.0 * kPi / nodes;  // arc length
  }
  g->rho_factor_ = std::exp(-0.25 * R * R);

  const int M = 2 * band + 1;
  g->Ymat_.resize(nodes, M);
  g->Amat_.resize(M, nodes);
  g->level_.resize(M);
  g->order_.resize(M);
  g->partner_.resize(M);
  g->lap_eig_.resize(M);
  g->labels_.resize(M);
  int i = 0;
  for (int k = 0; k <= band; ++k) {
    const int reps = (k == 0) ? 1 : 2;
    for (int p = 0; p < reps; ++p, ++i) {
      for (int j = 0; j < nodes; ++j) {
        const double th = g->theta_(j);
        g->Ymat_(j, i) = (p == 0) ? std::cos(k * th) : std::sin(k * th);
      }
      const double scale = (k == 0) ? 1.0 / nodes : 2.0 / nodes;
      g->Amat_.row(i) = scale * g->Ymat_.col(i).transpose();
      g->level_(i) = k;
      g->order_(i) = k;
      g->partner_(i) = (k == 0) ? i : (p == 0 ? i + 1 : i - 1);
      g->lap_eig_(i) = -static_cast<double>(k) * k;  // d^2/dtheta^2 eigenvalue
      g->labels_[i] = (k == 0) ? "k=0" : ("k=" + std::to_string(k) + (p == 0 ? " cos" : " sin"));
    }
  }
  return g;
}

std::shared_ptr<const Grid> Grid::sphere(int band, int n_lat, int n_lon) {
  if (band < 3) throw std::invalid_argument("sphere band must be >= 3");
  if (n_lat <= 0) n_lat = band + 2;
  if (n_lon <= 0) n_lon = 2 * (band + 2);
  if (n_lat < band + 1) throw std::invalid_argument("n_lat too small for the requested band");
  if (n_lon < 2 * band + 1) throw std::invalid_argument("n_lon too small for the requested band");
  if (n_lat * n_lon < 16) throw std::invalid_argument("sphere grid needs >= 16 nodes");

  auto g = std::shared_ptr<Grid>(new Grid());
  g->shrinker_ = round_shrinker(2);
  g->kind_ = Kind::Sphere;
  g->band_ = band;
  g->n_lat_ = n_lat;
  g->n_lon_ = n_lon;
  const double R = g->shrinker_.radius;
  g->rho_factor_ = std::exp(-0.25 * R * R);

  Vec xq, wq;
  gauss_legendre(n_lat, xq, wq);

  const int N = n_lat * n_lon;
  g->positions_.resize(N, 3);
  g->weights_.resize(N);
  g->node_x_.resize(N);
  g->node_s_.resize(N);
  g->node_lon_.resize(N);
  for (int q = 0; q < n_lat; ++q) {
    const double x = xq(q);
    const double s = std::sqrt(1.0 - x * x);
    for (int p = 0; p < n_lon; ++p) {
      const int j = q * n_lon + p;
      const double lam = 2.0 * kPi * p / n_lon;
      g->node_x_(j) = x;
      g->node_s_(j) = s;
      g->node_lon_(j) = lam;
      g->positions_.row(j) << R * s * std::cos(lam), R * s * std::sin(lam), R * x;
      g->weights_(j) = R * R * wq(q) * (2.0 * kPi / n_lon);
    }
  }

  // Fully normalized associated Legendre Q_k^m with int_{-1}^1 Q^2 dx = 1/(2 pi),
  // no Condon-Shortley phase, plus the colatitude derivative.
  const int K = band;
  const int M = (K + 1) * (K + 1);
  Mat Q(n_lat, (K + 1) * (K + 2) / 2);    // packed (k, m), m <= k
  Mat dQ(n_lat, (K + 1) * (K + 2) / 2);
  auto idx = [K](int k, int m) { return k * (k + 1) / 2 + m; };
  for (int q = 0; q < n_lat; ++q) {
    const double x = xq(q);
    const double s = std::sqrt(1.0 - x * x);
    Q(q, idx(0, 0)) = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 1; m <= K; ++m) {
      Q(q, idx(m, m)) = std::sqrt((2.0 * m + 1) / (2.0 * m)) * s * Q(q, idx(m - 1, m - 1));
    }
    for (int m = 0; m < K; ++m) {
      Q(q, idx(m + 1, m)) = std::sqrt(2.0 * m + 3.0) * x * Q(q, idx(m, m));
    }
    for (int m = 0; m <= K; ++m) {
      for (int k = m + 2; k <= K; ++k) {
        const double a = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
        const double b = std::sqrt(((2.0 * k + 1) * ((k - 1.0) * (k - 1.0) - double(m) * m)) /
                                   ((2.0 * k - 3) * (double(k) * k - double(m) * m)));
        Q(q, idx(k, m)) = a * x * Q(q, idx(k - 1, m)) - b * Q(q, idx(k - 2, m));
      }
    }
    for (int m = 0; m <= K; ++m) {
      for (int k = m; k <= K; ++k) {
        if (k == 0) {
          dQ(q, idx(k, m)) = 0.0;
        } else if (k == m) {
          dQ(q, idx(k, m)) = m * x * Q(q, idx(k, m)) / s;
        } else {
          const double e = std::sqrt((2.0 * k + 1) * (double(k) * k - double(m) * m) / (2.0 * k - 1));
          dQ(q, idx(k, m)) = (k * x * Q(q, idx(k, m)) - e * Q(q, idx(k - 1, m))) / s;
        }
      }
    }
  }

  g->Ymat_.resize(N, M);
  g->Ytheta_.resize(N, M);
  g->Amat_.resize(M, N);
  g->level_.resize(M);
  g->order_.resize(M);
  g->partner_.resize(M);
  g->lap_eig_.resize(M);
  g->labels_.resize(M);

  Vec what(N);  // unit-sphere quadrature weights
  for (int q = 0; q < n_lat; ++q)
    for (int p = 0; p < n_lon; ++p) what(q * n_lon + p) = wq(q) * (2.0 * kPi / n_lon);

  int i = 0;
  for (int k = 0; k <= K; ++k) {
    for (int m = 0; m <= k; ++m) {
      const int reps = (m == 0) ? 1 : 2;
      for (int p = 0; p < reps; ++p, ++i) {
        const double fac = (m == 0) ? 1.0 : std::numbers::sqrt2;
        for (int q = 0; q < n_lat; ++q) {
          for (int pp = 0; pp < n_lon; ++pp) {
            const int j = q * n_lon + pp;
            const double lam = g->node_lon_(j);
            const double ang = (p == 0) ? std::cos(m * lam) : std::sin(m * lam);
            g->Ymat_(j, i) = fac * Q(q, idx(k, m)) * ang;
            g->Ytheta_(j, i) = fac * dQ(q, idx(k, m)) * ang;
          }
        }
        g->Amat_.row(i) = (g->Ymat_.col(i).array() * what.array()).transpose();
        g->level_(i) = k;
        g->order_(i) = m;
        g->partner_(i) = (m == 0) ? i : (p == 0 ? i + 1 : i - 1);
        g->lap_eig_(i) = -static_cast<double>(k) * (k + 1);
        g->labels_[i] = "k=" + std::to_string(k) + " m=" + std::to_string(m) +
                        (m == 0 ? "" : (p == 0 ? " cos" : " sin"));
      }
    }
  }
  return g;
}

Vec Grid::analyze(const Eigen::Ref<const Vec>& u) const {
  if (u.size() != nodes()) throw DimensionError("grid function size mismatch in analyze");
  return Amat_ * u;
}

Vec Grid::synthesize(const Eigen::Ref<const Vec>& c) const {
  if (c.size() != modes()) throw DimensionError("coefficient size mismatch in synthesize");
  return Ymat_ * c;
}

Vec Grid::angular_derivative(const Eigen::Ref<const Vec>& c) const {
  if (c.size() != modes()) throw DimensionError("coefficient size mismatch in angular_derivative");
  Vec out = Vec::Zero(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const int m = order_(i);
    if (m == 0) continue;
    // d/dphi of (c_cos cos m phi + c_sin sin m phi):
    // cos slot gains +m c_sin, sin slot gains -m c_cos.
    if (partner_(i) > i) {
      out(i) += m * c(partner_(i));     // this is the cos slot
    } else {
      out(i) -= m * c(partner_(i));     // this is the sin slot
    }
  }
  return out;
}

Grid::Derivatives Grid::differentiate(const Eigen::Ref<const Vec>& u) const {
  Derivatives d;
  const Vec c = analyze(u);
  d.f = Ymat_ * c;
  d.lap_ref = Ymat_ * (lap_eig_.array() * c.array()).matrix();
  if (kind_ == Kind::Circle) {
    const Vec c1 = angular_derivative(c);
    d.d1 = Ymat_ * c1;
    d.d2 = d.lap_ref;  // on the circle the reference Laplacian is d^2/dtheta^2
  } else {
    const Vec cl = angular_derivative(c);
    d.d1 = Ytheta_ * c;
    d.dl = Ymat_ * cl;
    d.dll = Ymat_ * angular_derivative(cl);
    d.d1l = Ytheta_ * cl;
    // f_tt from the spherical Laplacian identity:
    // lap = f_tt + cot(t) f_t + f_ll / sin^2
    d.d2 = d.lap_ref - (node_x_.array() / node_s_.array() * d.d1.array()).matrix() -
           (d.dll.array() / node_s_.array().square()).matrix();
  }
  return d;
}

double Grid::inner(const Eigen::Ref<const Vec>& u, const Eigen::Ref<const Vec>& v) const {
  if (u.size() != nodes() || v.size() != nodes())
    throw DimensionError("grid function size mismatch in inner");
  return rho_factor_ * (u.array() * v.array() * weights_.array()).sum();
}

double Grid::norm(const Eigen::Ref<const Vec>& u) const {
  return std::sqrt(inner(u, u));
}

Points Grid::ambient_gradient(const Eigen::Ref<const Vec>& u) const {
  const Derivatives d = differentiate(u);
  const double R = shrinker_.radius;
  Points out(nodes(), 3);
  if (kind_ == Kind::Circle) {
    for (Eigen::Index j = 0; j < nodes(); ++j) {
      const double th = theta_(j);
      // grad u = (u_theta / R) e_theta
      out.row(j) << -std::sin(th) * d.d1(j) / R, std::cos(th) * d.d1(j) / R, 0.0;
    }
  } else {
    for (Eigen::Index j = 0; j < nodes(); ++j) {
      const double s = node_s_(j), x = node_x_(j), lam = node_lon_(j);
      const Eigen::Vector3d e_t(x * std::cos(lam), x * std::sin(lam), -s);
      const Eigen::Vector3d e_l(-std::sin(lam), std::cos(lam), 0.0);
      out.row(j) = ((d.d1(j) * e_t + (d.dl(j) / s) * e_l) / R).transpose();
    }
  }
  return out;
}

}  // namespace shrinkflow
