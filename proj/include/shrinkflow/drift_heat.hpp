#pragma once

#include "shrinkflow/spectrum.hpp"

namespace shrinkflow {

/// Sampled profile of I(u,s) = ||u(s)||_{L^2(rho)} under the drift heat flow.
struct LinearEvolution {
  ModeVector initial;
  Vec times;
  Vec profile;                ///< I(u, s) at the sampled times
  bool zero_solution = false;
};

/// Spectral flow a_i -> a_i e^{-mu_i s}; defined for either sign of s.
/// Throws std::range_error (naming the mode) if a coefficient overflows.
ModeVector evolve_linear(const ModeVector& a, double s);

/// I(u,0) = sqrt(sum a_i^2).
double l2_norm(const ModeVector& a);

/// I(u,s) by the Plancherel sum, without materializing the coefficients.
double profile_at(const ModeVector& a, double s);

/// Profile along a sorted grid; log I is convex, and linear exactly when the
/// data sits on a single eigenvalue.
LinearEvolution l2_profile(const ModeVector& a, const Eigen::Ref<const Vec>& s_grid);

/// Three-annulus growth improvement: if I(t+1) >= e^{delta1} I(t) then
/// I(t+2) >= e^{delta2} I(t+1) for some delta2 > delta1.
struct ThreeAnnulusReport {
  bool hypothesis_met = false;
  double delta1 = 0.0;
  double log_ratio_01 = 0.0;    ///< log I(t+1)/I(t)
  double achieved_delta2 = 0.0; ///< log I(t+2)/I(t+1)
  bool conclusion_holds = false;
};
ThreeAnnulusReport three_annulus_check(const ModeVector& a, double t, double delta1);

/// Forward-or-backward growth by the certified e^delta when no zero mode is
/// present.
struct DichotomyReport {
  bool zero_mode_free = true;
  bool forward = false;          ///< which branch achieved the growth
  double achieved_delta = 0.0;   ///< best of the two log ratios
  double certified_delta = 0.0;
  bool holds = false;
};
DichotomyReport zero_mode_dichotomy(const ModeVector& a, double t);

/// Result of the eigenvalue-gap scan for the quantitative three-annulus
/// estimate.
struct GapChoice {
  double L0 = 0.0;
  double L = 0.0;
  double C0 = 0.0;
  double B = 0.0;
  double gap = 0.0;        ///< min_j |mu_j - ln(2 C0)/L|
  double threshold = 0.0;  ///< ln(2 C0)/L
  double certificate = 0.0; ///< required lower bound C1^{-1} L^{m-1}
  WeylFit weyl;
};

/// Scans L in [L0/2, L0] maximizing the spectral gap around ln(2C0)/L and
/// derives B so that (1 - L^B)^2 exceeds both 1/(1 + C1^{-1} L^m) and
/// 1/cosh(2 L gap). Throws InsufficientSpectrumError when the spectrum does
/// not resolve past the threshold or the gap certificate fails.
GapChoice choose_gap_L(const Spectrum& spectrum, double L0, double C0,
                       int scan = 10000);

struct QuantitativeAnnulusReport {
  bool hypotheses_met = false;
  double I0 = 0.0, IL = 0.0, I2L = 0.0;
  double bound = 0.0;       ///< 1 - L^B
  double margin = 0.0;      ///< bound - I(u, L)
  double cosh_sum = 0.0;    ///< sum a_j^2 e^{-2 mu_j L} cosh(2 mu_j L - ln 4C0^2)
  bool cosh_ok = false;
  bool conclusion_holds = false;
};

/// Checks I(u,L) <= 1 - L^B under I(u,0) <= 2C0, I(u,2L) <= 1/(2C0),
/// together with the intermediate cosh inequality.
QuantitativeAnnulusReport quantitative_three_annulus(const ModeVector& a,
                                                     const GapChoice& choice);

/// Mode coefficients sampled on a uniform time grid.
struct TimeSampledModes {
  SpectrumPtr spectrum;
  Vec times;
  Mat coeffs;  ///< times.size() rows, one column per mode
};

struct DuhamelResult {
  TimeSampledModes w;        ///< solution with w(0) = 0
  double residual_max = 0.0; ///< max_t ||(d/dt - L) w - f|| at interior times
  double empirical_C = 0.0;  ///< sup_t ||w(t)|| / (t sup_{s<=t} ||f(s)||)
};

/// One-mode Duhamel coefficient b(t) = e^{-mu t} int_0^t e^{mu s} a(s) ds on a
/// uniform time grid, integrated exactly against piecewise-linear data; the
/// mu = 0 case reduces to the plain (trapezoid) integral.
Vec duhamel_coefficient(double mu, const Eigen::Ref<const Vec>& times,
                        const Eigen::Ref<const Vec>& a);

/// Right inverse of (d/dt - L): b_i(t) = e^{-mu_i t} int_0^t e^{mu_i s} a_i(s) ds,
/// integrated exactly against piecewise-linear-in-time data. Requires
/// t_end <= 1 and f sampled on a uniform grid over [0, t_end].
DuhamelResult duhamel_inverse(const TimeSampledModes& f, double t_end);

}  // namespace shrinkflow
