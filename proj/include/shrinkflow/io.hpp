#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shrinkflow/batteries.hpp"
#include "shrinkflow/doubling.hpp"
#include "shrinkflow/drift_heat.hpp"
#include "shrinkflow/flow.hpp"

namespace shrinkflow::io {

inline constexpr int kSchemaVersion = 1;

/// Writes content to a temp file next to `path`, then renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Shortest-exact formatting ("%.17g") so repeated runs are byte-identical.
std::string format_double(double v);

/// Batch experiment configuration; field names follow the config file schema.
struct ExperimentConfig {
  int n = 1;
  int cutoff = 0;            ///< 0 -> 64 on the circle, 32 on the sphere
  int grid_size = 0;         ///< circle nodes or sphere n_lat; 0 -> defaults
  double dtau = 1e-3;
  double tau_end = 3.0;
  double sample_dtau = 1e-3;
  int state_stride = 1;
  double c0 = 0.0;           ///< 0 -> 0.2 * radius
  double epsilon = 0.05;
  double L0 = 0.25;
  double C0 = 2.0;
  double A = 0.0;            ///< 0 -> derived (B - 1)/gamma0
  double gamma0 = 0.5;
  int trials = 1000;
  std::uint64_t seed = 12345;
  double delta1 = 0.1;
  int K_orders = 4;
  int battery_level = 8;     ///< band of the randomized batteries
  double monotonicity_tol = 1e-4;
  double duhamel_tol = 1e-5;
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};

  int effective_cutoff() const { return cutoff > 0 ? cutoff : (n == 1 ? 64 : 32); }
  bool wants(const std::string& fmt) const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);
std::string config_json(const ExperimentConfig& cfg);

/// Grid/spectrum builders honoring the config defaults.
GridPtr make_grid(const ExperimentConfig& cfg);
SpectrumPtr make_spectrum(const ExperimentConfig& cfg, GridPtr grid);

/// Resolves the doubling exponent: explicit A, or (B-1)/gamma0 through the
/// gap choice at (L0, C0).
double resolve_A(const ExperimentConfig& cfg, const Spectrum& spectrum);

// --- CSV ---
std::string spectrum_csv(const Spectrum& s);
std::string mode_vector_csv(const ModeVector& a);
std::string trajectory_csv(const Trajectory& t);
std::string time_modes_csv(const TimeSampledModes& m);
std::string window_ratios_csv(const TrajectorySeries& s, double chain_constant);

/// Parses a trajectory CSV back into a series (tau, distance, excess).
/// Throws std::runtime_error naming the offending line on malformed input.
TrajectorySeries series_from_csv(const std::string& text);

// --- JSON (strings; already schema-versioned) ---
std::string spectrum_json(const Spectrum& s);
std::string graph_json(const RadialGraph& g);
RadialGraph graph_from_json(const std::string& text);
std::string trajectory_manifest(const Trajectory& t, const std::string& initial_spec,
                                std::uint64_t seed, int state_stride);
Trajectory trajectory_from_manifest(const std::string& text);

std::string monotonicity_json(const MonotonicityReport& r, double tol);
std::string lemma25_json(const SemiContinuityReport& r, double epsilon);
std::string prop31_scan_json(const std::vector<Prop31Report>& reports,
                             const GapChoice& choice, double A);
std::string doubling_audit_json(const DoublingAudit& a);
std::string classification_json(const OrderClassification& c);
std::string gap_choice_json(const GapChoice& c);
std::string three_annulus_battery_json(const ThreeAnnulusBattery& b);
std::string dichotomy_battery_json(const DichotomyBattery& b);
std::string prop24_battery_json(const Prop24Battery& b);
std::string duhamel_battery_json(const DuhamelBattery& b, double tol);
std::string logconvexity_battery_json(const LogConvexityBattery& b);

/// Parses "zero", "mode k=2 amp=1e-3 [m=0] [sin]", or "file:PATH".
RadialGraph parse_initial_spec(const std::string& spec, GridPtr grid);

}  // namespace shrinkflow::io
