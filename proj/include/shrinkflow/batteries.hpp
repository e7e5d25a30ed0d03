#pragma once

#include <cstdint>
#include <vector>

#include "shrinkflow/drift_heat.hpp"

namespace shrinkflow {

/// Gaussian coefficients on the modes of level <= max_level, zero elsewhere.
ModeVector random_band_vector(SpectrumPtr spectrum, int max_level,
                              std::uint64_t seed);

struct LogConvexityBattery {
  int trials = 0;
  int violations = 0;             ///< second difference of log I below -1e-10
  double min_second_diff = 0.0;
  int single_level_trials = 0;
  double max_single_level_dev = 0.0;  ///< worst |second diff| on one-eigenvalue data
};
LogConvexityBattery logconvexity_battery(SpectrumPtr spectrum, int trials,
                                         std::uint64_t seed, int max_level,
                                         double s_max = 2.0, double ds = 0.05);

struct DichotomyBattery {
  int trials = 0;
  int violations = 0;
  double certified_delta = 0.0;
  double min_achieved = 0.0;
};
DichotomyBattery dichotomy_battery(SpectrumPtr spectrum, int trials,
                                   std::uint64_t seed, int max_level);

struct ThreeAnnulusBattery {
  int trials = 0;
  int hypothesis_met = 0;
  int violations = 0;      ///< hypothesis met but no strict improvement
  double delta1 = 0.0;
  double min_improvement = 0.0;  ///< min(delta2 - delta1) over hypothesis-met trials
};
ThreeAnnulusBattery three_annulus_battery(SpectrumPtr spectrum, int trials,
                                          std::uint64_t seed, int max_level,
                                          double delta1);

struct Prop24Setting {
  double C0 = 0.0;
  double L0 = 0.0;
  GapChoice choice;
  int trials = 0;
  int violations = 0;
  int cosh_violations = 0;
  double min_margin = 0.0;
};
struct Prop24Battery {
  std::vector<Prop24Setting> settings;
  int total_violations = 0;
  int total_cosh_violations = 0;
};
Prop24Battery prop24_battery(SpectrumPtr spectrum, const std::vector<double>& C0s,
                             const std::vector<double>& L0s, int trials,
                             std::uint64_t seed, int max_level);

struct DuhamelBattery {
  int trials = 0;
  double max_residual = 0.0;
  double empirical_C = 0.0;   ///< max over trials
  double dt = 0.0;
};
/// Random smooth-in-time band-limited sources on [0, 1]; the constant mode
/// always carries unit amplitude so the empirical constant is pinned by the
/// slowest eigenvalue.
DuhamelBattery duhamel_battery(SpectrumPtr spectrum, int trials,
                               std::uint64_t seed, int max_level,
                               double dt = 1e-3);

}  // namespace shrinkflow
