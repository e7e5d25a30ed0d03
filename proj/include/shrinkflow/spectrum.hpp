#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shrinkflow/geometry.hpp"
#include "shrinkflow/grid.hpp"

namespace shrinkflow {

/// Polynomial counting bound: #{ mu_j + offset <= N } <= C1 * N^m for N > 1.
struct WeylFit {
  double C1 = 0.0;
  double m = 0.0;      ///< n/2 + 1/2
  double offset = 2.0; ///< shifts the minimum eigenvalue -1 above zero
};

/// Eigendecomposition of the drift operator L = Lap - x.grad/2 + |A|^2 + 1/2
/// on a round shrinker: -L phi_i = mu_i phi_i with mu_1 <= mu_2 <= ...,
/// orthonormal in the Gaussian-weighted inner product.
///
/// Closed forms: on S^1(sqrt2) mu(k) = k^2/2 - 1 (multiplicity 2 for k >= 1);
/// on S^2(2) mu(k) = k(k+1)/4 - 1 (multiplicity 2k+1). Ordering ties are
/// broken by harmonic index then cos before sin.
class Spectrum {
 public:
  const Shrinker& shrinker() const { return grid_->shrinker(); }
  const GridPtr& grid() const { return grid_; }
  int levels() const { return levels_; }
  Eigen::Index size() const { return eigenvalues_.size(); }

  const Vec& eigenvalues() const { return eigenvalues_; }
  const IVec& level() const { return level_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Mat& basis() const { return basis_; }        ///< nodes x modes, phi_i columns
  const Mat& analysis() const { return analysis_; }  ///< modes x nodes
  const WeylFit& weyl() const { return weyl_; }
  double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }

  /// Band-limited projection of a grid function onto span{phi_i}.
  Vec filter(const Eigen::Ref<const Vec>& u) const;

 private:
  friend std::shared_ptr<const Spectrum> build_spectrum(const Shrinker&, int,
                                                        GridPtr);
  GridPtr grid_;
  int levels_ = 0;
  Vec eigenvalues_;
  IVec level_;
  std::vector<std::string> labels_;
  Mat basis_;
  Mat analysis_;
  WeylFit weyl_;
};

using SpectrumPtr = std::shared_ptr<const Spectrum>;

/// Builds the spectrum with `levels` distinct eigenvalue levels (>= 4).
/// A null grid picks a default sized for the cutoff.
SpectrumPtr build_spectrum(const Shrinker& shrinker, int levels,
                           GridPtr grid = nullptr);

/// Coefficients of a function in the L-eigenbasis.
struct ModeVector {
  SpectrumPtr spectrum;
  Vec a;
};

/// L u computed spectrally (Laplacian through the grid tables, the drift
/// term x.grad u evaluated literally in ambient coordinates, plus the
/// zeroth-order part).
Vec apply_L(const Eigen::Ref<const Vec>& u, const Spectrum& spectrum);

/// x . grad_Sigma u at the nodes; vanishes on round shrinkers since the
/// position is normal to the sphere. Exposed so the vanishing is testable.
Vec drift_term(const Eigen::Ref<const Vec>& u, const Grid& grid);

/// Gaussian-weighted projection a_i = <u, phi_i>.
ModeVector project(const Eigen::Ref<const Vec>& u, SpectrumPtr spectrum);

/// Grid values of sum a_i phi_i.
Vec synthesize(const ModeVector& a);

/// #{ j : mu_j <= N }. Throws InsufficientSpectrumError when N exceeds the
/// resolved range.
int weyl_count(const Spectrum& spectrum, double N);

/// Certified delta for the three-annulus growth-improvement statement:
/// half the smallest nonzero |mu|.
double certified_growth_delta(const Spectrum& spectrum);

/// Certified delta for the forward-or-backward dichotomy: the exact
/// two-mode worst case min over pairs mu_a < 0 < mu_b of the equalized
/// growth rate (a linear program whose optimum sits on pairs).
double certified_dichotomy_delta(const Spectrum& spectrum);

}  // namespace shrinkflow
