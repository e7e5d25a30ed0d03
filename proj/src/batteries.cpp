#include "shrinkflow/batteries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

namespace {

Vec gaussian_band(const Spectrum& spectrum, int max_level, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec a = Vec::Zero(spectrum.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (spectrum.level()(i) <= max_level) a(i) = normal(rng);
  }
  return a;
}

}  // namespace

ModeVector random_band_vector(SpectrumPtr spectrum, int max_level, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return ModeVector{spectrum, gaussian_band(*spectrum, max_level, rng)};
}

LogConvexityBattery logconvexity_battery(SpectrumPtr spectrum, int trials,
                                         std::uint64_t seed, int max_level,
                                         double s_max, double ds) {
  std::mt19937_64 rng(seed);
  LogConvexityBattery out;
  out.trials = trials;
  out.min_second_diff = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::round(s_max / ds));
  Vec grid(steps + 1);
  for (int i = 0; i <= steps; ++i) grid(i) = i * ds;

  std::uniform_int_distribution<int> pick_level(0, max_level);
  for (int t = 0; t < trials; ++t) {
    ModeVector a{spectrum, gaussian_band(*spectrum, max_level, rng)};
    if (l2_norm(a) == 0.0) continue;
    const LinearEvolution ev = l2_profile(a, grid);
    for (int i = 1; i < steps; ++i) {
      const double d2 = std::log(ev.profile(i + 1)) - 2.0 * std::log(ev.profile(i)) +
                        std::log(ev.profile(i - 1));
      out.min_second_diff = std::min(out.min_second_diff, d2);
      if (d2 < -1e-10) ++out.violations;
    }
  }
  // single-eigenvalue data: log I must be exactly linear
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < std::max(1, trials / 10); ++t) {
    const int k = pick_level(rng);
    Vec a = Vec::Zero(spectrum->size());
    bool any = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (spectrum->level()(i) == k) {
        a(i) = normal(rng);
        any = true;
      }
    }
    if (!any) continue;
    ++out.single_level_trials;
    ModeVector mv{spectrum, std::move(a)};
    const LinearEvolution ev = l2_profile(mv, grid);
    for (int i = 1; i < steps; ++i) {
      const double d2 = std::log(ev.profile(i + 1)) - 2.0 * std::log(ev.profile(i)) +
                        std::log(ev.profile(i - 1));
      out.max_single_level_dev = std::max(out.max_single_level_dev, std::abs(d2));
    }
  }
  return out;
}

DichotomyBattery dichotomy_battery(SpectrumPtr spectrum, int trials,
                                   std::uint64_t seed, int max_level) {
  std::mt19937_64 rng(seed);
  DichotomyBattery out;
  out.trials = trials;
  out.certified_delta = certified_dichotomy_delta(*spectrum);
  out.min_achieved = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    ModeVector a{spectrum, gaussian_band(*spectrum, max_level, rng)};
    if (l2_norm(a) == 0.0) continue;
    const DichotomyReport r = zero_mode_dichotomy(a, 0.0);
    out.min_achieved = std::min(out.min_achieved, r.achieved_delta);
    if (!r.holds) ++out.violations;
  }
  return out;
}

ThreeAnnulusBattery three_annulus_battery(SpectrumPtr spectrum, int trials,
                                          std::uint64_t seed, int max_level,
                                          double delta1) {
  std::mt19937_64 rng(seed);
  ThreeAnnulusBattery out;
  out.trials = trials;
  out.delta1 = delta1;
  out.min_improvement = std::numeric_limits<double>::infinity();
  Eigen::Index band_end = 0;
  for (Eigen::Index i = 0; i < spectrum->size(); ++i) {
    if (spectrum->level()(i) <= max_level) band_end = i + 1;
  }
  std::uniform_int_distribution<Eigen::Index> pick(0, band_end - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::Index i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    Vec a = Vec::Zero(spectrum->size());
    a(i) = normal(rng);
    a(j) = normal(rng);
    if (a(i) == 0.0 && a(j) == 0.0) continue;
    ModeVector mv{spectrum, std::move(a)};
    const ThreeAnnulusReport r = three_annulus_check(mv, 0.0, delta1);
    if (!r.hypothesis_met) continue;
    ++out.hypothesis_met;
    out.min_improvement = std::min(out.min_improvement, r.achieved_delta2 - delta1);
    if (!r.conclusion_holds) ++out.violations;
  }
  return out;
}

Prop24Battery prop24_battery(SpectrumPtr spectrum, const std::vector<double>& C0s,
                             const std::vector<double>& L0s, int trials,
                             std::uint64_t seed, int max_level) {
  Prop24Battery out;
  std::mt19937_64 rng(seed);
  for (double C0 : C0s) {
    for (double L0 : L0s) {
      Prop24Setting setting;
      setting.C0 = C0;
      setting.L0 = L0;
      setting.choice = choose_gap_L(*spectrum, L0, C0);
      setting.trials = trials;
      setting.min_margin = std::numeric_limits<double>::infinity();
      for (int t = 0; t < trials; ++t) {
        Vec a = gaussian_band(*spectrum, max_level, rng);
        ModeVector mv{spectrum, std::move(a)};
        const double I0 = l2_norm(mv);
        const double I2L = profile_at(mv, 2.0 * setting.choice.L);
        if (I0 == 0.0) continue;
        // scale so both hypotheses hold, one with equality
        const double sigma = std::min(2.0 * C0 / I0, 1.0 / (2.0 * C0) / I2L);
        mv.a *= sigma;
        const QuantitativeAnnulusReport r = quantitative_three_annulus(mv, setting.choice);
        if (!r.hypotheses_met) continue;  // should not happen by construction
        setting.min_margin = std::min(setting.min_margin, r.margin);
        if (!(r.IL <= r.bound + 1e-12)) ++setting.violations;
        if (!r.cosh_ok) ++setting.cosh_violations;
      }
      out.total_violations += setting.violations;
      out.total_cosh_violations += setting.cosh_violations;
      out.settings.push_back(setting);
    }
  }
  return out;
}

DuhamelBattery duhamel_battery(SpectrumPtr spectrum, int trials,
                               std::uint64_t seed, int max_level, double dt) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DuhamelBattery out;
  out.trials = trials;
  out.dt = dt;
  const double t_end = 1.0;
  const int T = static_cast<int>(std::round(t_end / dt)) + 1;
  Vec times(T);
  for (int j = 0; j < T; ++j) times(j) = j * dt;

  for (int t = 0; t < trials; ++t) {
    TimeSampledModes f;
    f.spectrum = spectrum;
    f.times = times;
    f.coeffs = Mat::Zero(T, spectrum->size());
    for (Eigen::Index i = 0; i < spectrum->size(); ++i) {
      if (spectrum->level()(i) > max_level) continue;
      const double c0 = (i == 0) ? 1.0 : normal(rng);
      const double c1 = 0.5 * normal(rng), c2 = 0.5 * normal(rng);
      for (int j = 0; j < T; ++j) {
        const double tt = times(j);
        f.coeffs(j, i) = c0 + c1 * std::sin(tt) + c2 * std::cos(2.0 * tt);
      }
    }
    const DuhamelResult r = duhamel_inverse(f, t_end);
    out.max_residual = std::max(out.max_residual, r.residual_max);
    out.empirical_C = std::max(out.empirical_C, r.empirical_C);
  }
  return out;
}

}  // namespace shrinkflow
