#include "shrinkflow/shrinker.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

Shrinker round_shrinker(int n) {
  if (n != 1 && n != 2) {
    throw UnsupportedGeometryError("round shrinker supports n in {1, 2}, got n=" +
                                   std::to_string(n));
  }
  Shrinker s;
  s.n = n;
  s.radius = std::sqrt(2.0 * n);
  s.second_fundamental_norm_sq = n / (s.radius * s.radius);
  // |S^n(R)| * (4 pi)^{-n/2} e^{-R^2/4}
  const double area = (n == 1) ? 2.0 * kPi * s.radius : 4.0 * kPi * s.radius * s.radius;
  s.gaussian_area = area * std::pow(4.0 * kPi, -0.5 * n) * std::exp(-0.25 * s.radius * s.radius);
  return s;
}

double gaussian_weight_sq(double norm_sq, int n) {
  return std::pow(4.0 * kPi, -0.5 * n) * std::exp(-0.25 * norm_sq);
}

double gaussian_weight(const Eigen::Vector3d& x, int n) {
  return gaussian_weight_sq(x.squaredNorm(), n);
}

}  // namespace shrinkflow
