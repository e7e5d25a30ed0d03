#include "shrinkflow/drift_heat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

namespace {

void require_spectrum(const ModeVector& a) {
  if (!a.spectrum) throw std::invalid_argument("mode vector without spectrum");
  if (a.a.size() != a.spectrum->size())
    throw DimensionError("mode vector length does not match the spectrum");
}

// phi1(z) = (1 - e^{-z})/z, phi2(z) = (z - 1 + e^{-z})/z^2, the weights of the
// exact integral of e^{-mu(h-s)} against linear-in-time data on one step.
double phi1(double z) {
  if (z == 0.0) return 1.0;
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.25) {
    // sum_{j>=0} (-z)^j / (j+2)!
    double term = 0.5, sum = 0.5;
    for (int j = 1; j <= 10; ++j) {
      term *= -z / (j + 2);
      sum += term;
    }
    return sum;
  }
  return (z - 1.0 + std::exp(-z)) / (z * z);
}

}  // namespace

ModeVector evolve_linear(const ModeVector& a, double s) {
  require_spectrum(a);
  const Vec& mu = a.spectrum->eigenvalues();
  Vec out = Vec::Zero(a.a.size());
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    if (a.a(i) == 0.0) continue;
    const double e = -mu(i) * s;
    if (e + std::log(std::abs(a.a(i))) > 709.0) {
      throw std::range_error("evolve_linear overflow at mode " + std::to_string(i) +
                             " (" + a.spectrum->labels()[i] + ")");
    }
    out(i) = a.a(i) * std::exp(e);
  }
  return ModeVector{a.spectrum, std::move(out)};
}

double l2_norm(const ModeVector& a) {
  require_spectrum(a);
  return a.a.norm();
}

double profile_at(const ModeVector& a, double s) {
  require_spectrum(a);
  const Vec& mu = a.spectrum->eigenvalues();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    if (a.a(i) == 0.0) continue;  // 0 * exp(overflow) would poison the sum
    sum += a.a(i) * a.a(i) * std::exp(-2.0 * mu(i) * s);
  }
  return std::sqrt(sum);
}

LinearEvolution l2_profile(const ModeVector& a, const Eigen::Ref<const Vec>& s_grid) {
  require_spectrum(a);
  if (s_grid.size() == 0) throw std::invalid_argument("empty time grid");
  for (Eigen::Index i = 1; i < s_grid.size(); ++i) {
    if (s_grid(i) <= s_grid(i - 1)) throw std::invalid_argument("time grid not sorted");
  }
  LinearEvolution ev;
  ev.initial = a;
  ev.times = s_grid;
  ev.profile.resize(s_grid.size());
  for (Eigen::Index i = 0; i < s_grid.size(); ++i) ev.profile(i) = profile_at(a, s_grid(i));
  ev.zero_solution = (a.a.norm() == 0.0);
  return ev;
}

ThreeAnnulusReport three_annulus_check(const ModeVector& a, double t, double delta1) {
  require_spectrum(a);
  if (l2_norm(a) == 0.0) throw std::invalid_argument("zero mode vector");
  const double delta = certified_growth_delta(*a.spectrum);
  if (!(delta1 < delta))
    throw std::invalid_argument("delta1 must be below the certified threshold " +
                                std::to_string(delta));
  ThreeAnnulusReport r;
  r.delta1 = delta1;
  const double I0 = profile_at(a, t);
  const double I1 = profile_at(a, t + 1.0);
  const double I2 = profile_at(a, t + 2.0);
  r.log_ratio_01 = std::log(I1 / I0);
  r.hypothesis_met = (r.log_ratio_01 >= delta1);
  r.achieved_delta2 = std::log(I2 / I1);
  r.conclusion_holds = r.hypothesis_met && (r.achieved_delta2 > delta1);
  return r;
}

DichotomyReport zero_mode_dichotomy(const ModeVector& a, double t) {
  require_spectrum(a);
  if (l2_norm(a) == 0.0) throw std::invalid_argument("zero mode vector");
  DichotomyReport r;
  const Vec& mu = a.spectrum->eigenvalues();
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    if (std::abs(mu(i)) < 1e-12 && a.a(i) != 0.0) r.zero_mode_free = false;
  }
  const double I0 = profile_at(a, t);
  const double fwd = std::log(profile_at(a, t + 1.0) / I0);
  const double bwd = std::log(profile_at(a, t - 1.0) / I0);
  r.forward = (fwd >= bwd);
  r.achieved_delta = std::max(fwd, bwd);
  r.certified_delta = certified_dichotomy_delta(*a.spectrum);
  r.holds = (r.achieved_delta >= r.certified_delta - 1e-12);
  return r;
}

GapChoice choose_gap_L(const Spectrum& spectrum, double L0, double C0, int scan) {
  if (!(L0 > 0.0 && L0 < 0.5)) throw std::invalid_argument("L0 must lie in (0, 1/2)");
  if (!(C0 > 1.0)) throw std::invalid_argument("C0 must exceed 1");
  if (scan < 2) throw std::invalid_argument("scan grid too small");

  const Vec& mu = spectrum.eigenvalues();
  const double t_max = std::log(2.0 * C0) / (0.5 * L0);
  if (spectrum.max_eigenvalue() < t_max + 1.0) {
    throw InsufficientSpectrumError(
        "spectrum resolved only to " + std::to_string(spectrum.max_eigenvalue()) +
        ", need beyond " + std::to_string(t_max + 1.0));
  }

  GapChoice best;
  best.L0 = L0;
  best.C0 = C0;
  best.weyl = spectrum.weyl();
  best.gap = -1.0;
  const double lo = 0.5 * L0;
  for (int i = 0; i < scan; ++i) {
    const double L = lo + (L0 - lo) * i / (scan - 1);
    const double T = std::log(2.0 * C0) / L;
    // nearest eigenvalue to T in the sorted list
    const double* base = mu.data();
    const double* it = std::lower_bound(base, base + mu.size(), T);
    double gap = std::numeric_limits<double>::infinity();
    if (it != base + mu.size()) gap = std::min(gap, *it - T);
    if (it != base) gap = std::min(gap, T - *(it - 1));
    if (gap > best.gap) {
      best.gap = gap;
      best.L = L;
      best.threshold = T;
    }
  }

  best.certificate = std::pow(best.L, best.weyl.m - 1.0) / best.weyl.C1;
  if (best.gap < best.certificate) {
    throw InsufficientSpectrumError("gap certificate failed: best gap " +
                                    std::to_string(best.gap) + " below " +
                                    std::to_string(best.certificate));
  }

  // B must make (1 - L^B)^2 exceed both 1/(1 + C1^{-1} L^m) and the sharper
  // 1/cosh(2 L gap) that actually drives the estimate.
  const double c_weyl = std::pow(best.L, best.weyl.m) / best.weyl.C1;
  const double lhs1 = 1.0 - 1.0 / std::sqrt(1.0 + c_weyl);
  const double lhs2 = 1.0 - 1.0 / std::sqrt(std::cosh(2.0 * best.L * best.gap));
  const double logL = std::log(best.L);
  const double B1 = std::log(lhs1) / logL;
  const double B2 = std::log(lhs2) / logL;
  best.B = 1.01 * std::max(B1, B2);
  return best;
}

QuantitativeAnnulusReport quantitative_three_annulus(const ModeVector& a,
                                                     const GapChoice& choice) {
  require_spectrum(a);
  QuantitativeAnnulusReport r;
  const double C0 = choice.C0, L = choice.L;
  r.I0 = l2_norm(a);
  r.IL = profile_at(a, L);
  r.I2L = profile_at(a, 2.0 * L);
  r.hypotheses_met = (r.I0 <= 2.0 * C0 + 1e-12) && (r.I2L <= 1.0 / (2.0 * C0) + 1e-12);
  r.bound = 1.0 - std::pow(L, choice.B);
  r.margin = r.bound - r.IL;
  // sum a^2 e^{-2 mu L} cosh(2 mu L - ln 4C0^2), accumulated per mode through
  // the overflow-free split e^{-2muL} cosh(2muL - c) = (e^{-c} + e^{-4muL+c})/2.
  const Vec& mu = a.spectrum->eigenvalues();
  const double fourC0sq = 4.0 * C0 * C0;
  double cosh_sum = 0.0;
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    const double sq = a.a(i) * a.a(i);
    cosh_sum += 0.5 * (sq / fourC0sq + sq * std::exp(-4.0 * mu(i) * L) * fourC0sq);
  }
  r.cosh_sum = cosh_sum;
  r.cosh_ok = (cosh_sum <= 1.0 + 1e-10);
  r.conclusion_holds = !r.hypotheses_met || (r.IL <= r.bound + 1e-12);
  return r;
}

Vec duhamel_coefficient(double mu, const Eigen::Ref<const Vec>& times,
                        const Eigen::Ref<const Vec>& a) {
  const Eigen::Index T = times.size();
  if (a.size() != T) throw DimensionError("times and samples differ in length");
  if (T < 2) throw std::invalid_argument("need at least 2 time samples");
  const double h = times(1) - times(0);
  Vec b = Vec::Zero(T);
  const double z = mu * h;
  const double E = std::exp(-z);
  const double p1 = phi1(z), p2 = phi2(z);
  for (Eigen::Index j = 0; j + 1 < T; ++j) {
    b(j + 1) = E * b(j) + h * (a(j) * (p1 - p2) + a(j + 1) * p2);
  }
  return b;
}

DuhamelResult duhamel_inverse(const TimeSampledModes& f, double t_end) {
  if (!f.spectrum) throw std::invalid_argument("time-sampled modes without spectrum");
  if (t_end > 1.0) throw std::domain_error("duhamel_inverse requires t_end <= 1");
  if (t_end <= 0.0) throw std::domain_error("t_end must be positive");
  const Eigen::Index T = f.times.size();
  const Eigen::Index M = f.spectrum->size();
  if (f.coeffs.rows() != T || f.coeffs.cols() != M)
    throw DimensionError("coefficient table does not match times x modes");
  if (T < 3) throw std::invalid_argument("need at least 3 time samples");
  const double h = f.times(1) - f.times(0);
  for (Eigen::Index j = 1; j < T; ++j) {
    if (std::abs(f.times(j) - f.times(j - 1) - h) > 1e-12)
      throw std::invalid_argument("time grid must be uniform");
  }
  if (std::abs(f.times(0)) > 1e-15 || std::abs(f.times(T - 1) - t_end) > 1e-9)
    throw std::invalid_argument("time grid must cover [0, t_end]");

  const Vec& mu = f.spectrum->eigenvalues();
  DuhamelResult res;
  res.w.spectrum = f.spectrum;
  res.w.times = f.times;
  res.w.coeffs = Mat::Zero(T, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    res.w.coeffs.col(i) = duhamel_coefficient(mu(i), f.times, f.coeffs.col(i));
  }

  // residual of (d/dt - L) w - f at interior times, central differences
  double worst = 0.0;
  for (Eigen::Index j = 1; j + 1 < T; ++j) {
    double sq = 0.0;
    for (Eigen::Index i = 0; i < M; ++i) {
      const double dt = (res.w.coeffs(j + 1, i) - res.w.coeffs(j - 1, i)) / (2.0 * h);
      const double r = dt + mu(i) * res.w.coeffs(j, i) - f.coeffs(j, i);
      sq += r * r;
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  res.residual_max = worst;

  double C = 0.0;
  double sup_f = f.coeffs.row(0).norm();
  for (Eigen::Index j = 1; j < T; ++j) {
    sup_f = std::max(sup_f, f.coeffs.row(j).norm());
    if (sup_f > 0.0) {
      C = std::max(C, res.w.coeffs.row(j).norm() / (f.times(j) * sup_f));
    }
  }
  res.empirical_C = C;
  return res;
}

}  // namespace shrinkflow
