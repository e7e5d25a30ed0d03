#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

#include "shrinkflow/shrinker.hpp"

namespace shrinkflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Quadrature grid on a round shrinker together with the spectral
/// analysis/synthesis tables used for differentiation and projection.
///
/// Circle S^1(sqrt2): uniform angular grid, trigonometric basis; trapezoid
/// quadrature is exact for trigonometric polynomials of degree < nodes.
/// Sphere S^2(2): Gauss-Legendre nodes in cos(colatitude) times a uniform
/// longitude grid; real spherical harmonics, exact quadrature up to the
/// stated band.
///
/// Immutable after construction; share via shared_ptr.
class Grid {
 public:
  enum class Kind { Circle, Sphere };

  /// Uniform grid with `nodes` points on S^1(sqrt2). band = 0 picks the
  /// largest alias-free band nodes/2 - 1.
  static std::shared_ptr<const Grid> circle(int nodes = 256, int band = 0);

  /// Gauss-Legendre x uniform grid on S^2(2) resolving harmonics through
  /// degree `band`. n_lat/n_lon = 0 pick the smallest exact sizes.
  static std::shared_ptr<const Grid> sphere(int band = 39, int n_lat = 0,
                                            int n_lon = 0);

  Kind kind() const { return kind_; }
  const Shrinker& shrinker() const { return shrinker_; }
  Eigen::Index nodes() const { return positions_.rows(); }
  Eigen::Index modes() const { return Ymat_.cols(); }
  int band() const { return band_; }

  const Points& positions() const { return positions_; }
  const Vec& weights() const { return weights_; }
  double rho_factor() const { return rho_factor_; }

  const Mat& basis_values() const { return Ymat_; }
  const Mat& basis_colat_derivative() const { return Ytheta_; }
  const IVec& mode_level() const { return level_; }
  const IVec& mode_order() const { return order_; }
  const IVec& mode_partner() const { return partner_; }
  const Vec& reference_laplacian_eigenvalues() const { return lap_eig_; }
  const std::vector<std::string>& mode_labels() const { return labels_; }

  const Vec& theta() const { return theta_; }       // circle angles
  const Vec& node_cos_colat() const { return node_x_; }
  const Vec& node_sin_colat() const { return node_s_; }
  const Vec& node_lon() const { return node_lon_; }
  int n_lat() const { return n_lat_; }
  int n_lon() const { return n_lon_; }

  /// Reference-basis coefficients of a grid function (band-limited projection).
  Vec analyze(const Eigen::Ref<const Vec>& u) const;
  /// Grid values of a coefficient vector.
  Vec synthesize(const Eigen::Ref<const Vec>& c) const;

  /// In-coefficient-space derivative along the periodic angle
  /// (theta on the circle, longitude on the sphere).
  Vec angular_derivative(const Eigen::Ref<const Vec>& c) const;

  /// Pointwise derivatives of the band-limited interpolant, with respect to
  /// the reference coordinates.
  struct Derivatives {
    Vec f;        ///< filtered values
    Vec d1;       ///< circle: d/dtheta; sphere: d/d(colat)
    Vec d2;       ///< circle: d2/dtheta2; sphere: d2/d(colat)2
    Vec dl;       ///< sphere: d/dlon
    Vec dll;      ///< sphere: d2/dlon2
    Vec d1l;      ///< sphere: mixed colat/lon
    Vec lap_ref;  ///< reference Laplacian (theta^2 on circle, unit-sphere on S^2)
  };
  Derivatives differentiate(const Eigen::Ref<const Vec>& u) const;

  /// Gaussian-weighted inner product int u v e^{-|x|^2/4} over Sigma.
  double inner(const Eigen::Ref<const Vec>& u,
               const Eigen::Ref<const Vec>& v) const;
  double norm(const Eigen::Ref<const Vec>& u) const;

  /// Tangential gradient expressed in ambient coordinates, one row per node.
  Points ambient_gradient(const Eigen::Ref<const Vec>& u) const;

 private:
  Grid() = default;

  Shrinker shrinker_;
  Kind kind_ = Kind::Circle;
  int band_ = 0;

  Points positions_;
  Vec weights_;
  double rho_factor_ = 1.0;

  Mat Ymat_;    // nodes x modes reference basis values
  Mat Amat_;    // modes x nodes analysis (reference measure)
  Mat Ytheta_;  // sphere: nodes x modes d/d(colat)
  IVec level_, order_, partner_;
  Vec lap_eig_;
  std::vector<std::string> labels_;

  Vec theta_;                      // circle
  Vec node_x_, node_s_, node_lon_; // sphere per-node cos/sin colat, lon
  int n_lat_ = 0, n_lon_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Vec& nodes, Vec& weights);

}  // namespace shrinkflow
