#pragma once

#include <Eigen/Core>

namespace shrinkflow {

/// A compact round self-shrinker S^n(sqrt(2n)) in R^{n+1}.
///
/// The sphere of radius sqrt(2n) is the unique round hypersurface satisfying
/// the shrinker equation H = <x, nu>/2 with outward normal nu, where H is the
/// scalar sum of principal curvatures.
struct Shrinker {
  int n = 1;                               ///< intrinsic dimension (1 or 2)
  double radius = 0.0;                     ///< sqrt(2n)
  double second_fundamental_norm_sq = 0.0; ///< |A|^2 = n / radius^2 = 1/2
  double gaussian_area = 0.0;              ///< closed-form F(Sigma)
};

/// Builds the round shrinker of intrinsic dimension n in {1, 2}.
/// Throws UnsupportedGeometryError otherwise.
Shrinker round_shrinker(int n);

/// Gaussian weight rho(x) = (4 pi)^{-n/2} exp(-|x|^2/4) at an ambient point.
/// Points on the circle live in the z = 0 plane.
double gaussian_weight(const Eigen::Vector3d& x, int n);

/// Same weight expressed through |x|^2.
double gaussian_weight_sq(double norm_sq, int n);

}  // namespace shrinkflow
