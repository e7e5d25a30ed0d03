// Batch experiment driver: builds spectra, runs linear/nonlinear evolutions,
// executes the trajectory and mode-vector audits, and emits plot-ready
// CSV/JSON. Exit codes: 0 ok, 1 usage or config error, 2 counterexample
// found by an audit, 3 numerical failure.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "shrinkflow/batteries.hpp"
#include "shrinkflow/doubling.hpp"
#include "shrinkflow/errors.hpp"
#include "shrinkflow/io.hpp"

namespace fs = std::filesystem;
using namespace shrinkflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCounterexample = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string formats;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

io::ExperimentConfig resolve_config(const CommonOpts& opts) {
  io::ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = io::load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed_set) cfg.seed = opts.seed;
  if (!opts.formats.empty()) {
    cfg.formats.clear();
    std::istringstream ss(opts.formats);
    std::string f;
    while (std::getline(ss, f, ',')) cfg.formats.push_back(f);
  }
  io::validate(cfg);
  return cfg;
}

FlowParams flow_params(const io::ExperimentConfig& cfg) {
  FlowParams p;
  p.dtau = cfg.dtau;
  p.c0 = cfg.c0;
  p.epsilon = cfg.epsilon;
  return p;
}

int cmd_spectrum(const io::ExperimentConfig& cfg) {
  SpectrumPtr sp = io::make_spectrum(cfg, io::make_grid(cfg));
  const fs::path dir(cfg.out_dir);
  if (cfg.wants("json")) io::atomic_write(dir / "spectrum.json", io::spectrum_json(*sp));
  if (cfg.wants("csv"))
    io::atomic_write(dir / "spectrum_eigenvalues.csv", io::spectrum_csv(*sp));
  std::cout << "spectrum: " << sp->size() << " modes over " << sp->levels()
            << " levels written to " << cfg.out_dir << "\n";
  return kExitOk;
}

int cmd_evolve(const io::ExperimentConfig& cfg, const std::string& initial,
               const std::string& stem) {
  GridPtr grid = io::make_grid(cfg);
  SpectrumPtr sp = io::make_spectrum(cfg, grid);
  const RadialGraph g0 = io::parse_initial_spec(initial, grid);
  const Trajectory traj = run(g0, sp, flow_params(cfg), cfg.tau_end, cfg.sample_dtau);
  const fs::path dir(cfg.out_dir);
  if (cfg.wants("csv")) io::atomic_write(dir / (stem + ".csv"), io::trajectory_csv(traj));
  if (cfg.wants("json"))
    io::atomic_write(dir / (stem + "_manifest.json"),
                     io::trajectory_manifest(traj, initial, cfg.seed, cfg.state_stride));
  std::cout << "evolve: " << traj.states.size() << " samples to tau "
            << traj.states.back().tau
            << (traj.log.halted_infinite ? " (left the graphical regime)" : "") << "\n";
  return kExitOk;
}

struct LoadedTrajectory {
  TrajectorySeries series;
  Trajectory full;  // states empty when only a CSV was given
  bool has_states = false;
};

LoadedTrajectory load_trajectory(const std::string& path) {
  LoadedTrajectory out;
  if (path.empty()) throw std::invalid_argument("audit needs --trajectory PATH");
  const std::string text = io::read_file(path);
  if (fs::path(path).extension() == ".json") {
    out.full = io::trajectory_from_manifest(text);
    out.series = series(out.full);
    out.has_states = true;
  } else {
    out.series = io::series_from_csv(text);
  }
  return out;
}

int cmd_audit(const io::ExperimentConfig& cfg, const std::string& which,
              const std::string& trajectory_path) {
  const fs::path dir(cfg.out_dir);
  const auto report_path = [&](const std::string& name) { return dir / (name + ".json"); };

  if (which == "monotonicity") {
    const LoadedTrajectory t = load_trajectory(trajectory_path);
    if (!t.has_states)
      throw std::invalid_argument(
          "monotonicity audit needs the trajectory manifest (.json) with states");
    const MonotonicityReport rep = monotonicity_audit(t.full);
    io::atomic_write(report_path("audit_monotonicity"),
                     io::monotonicity_json(rep, cfg.monotonicity_tol));
    std::cout << "monotonicity: max defect " << rep.max_defect << "\n";
    return rep.max_defect <= cfg.monotonicity_tol ? kExitOk : kExitCounterexample;
  }
  if (which == "lemma25") {
    const LoadedTrajectory t = load_trajectory(trajectory_path);
    const SemiContinuityReport rep = lemma25_audit(t.series, cfg.epsilon);
    io::atomic_write(report_path("audit_lemma25"), io::lemma25_json(rep, cfg.epsilon));
    std::cout << "lemma25: empirical C0 " << rep.empirical_C0 << " over "
              << rep.windows_checked << " windows\n";
    return kExitOk;
  }
  if (which == "prop31") {
    const LoadedTrajectory t = load_trajectory(trajectory_path);
    SpectrumPtr sp = io::make_spectrum(cfg, io::make_grid(cfg));
    const GapChoice choice = choose_gap_L(*sp, cfg.L0, cfg.C0);
    const double A = io::resolve_A(cfg, *sp);
    std::vector<Prop31Report> reports;
    const double end = t.series.tau(t.series.tau.size() - 1);
    for (Eigen::Index i = 0; i < t.series.tau.size(); ++i) {
      const double tau = t.series.tau(i);
      if (tau + std::max(2.0 * choice.L, 1.0) > end + 1e-12) break;
      reports.push_back(prop31_window_check(t.series, tau, choice, A, cfg.epsilon));
    }
    io::atomic_write(report_path("audit_prop31"), io::prop31_scan_json(reports, choice, A));
    long violations = 0;
    for (const auto& r : reports) violations += r.violated ? 1 : 0;
    std::cout << "prop31: " << reports.size() << " windows, " << violations
              << " violations\n";
    return violations == 0 ? kExitOk : kExitCounterexample;
  }
  if (which == "theorem11") {
    const LoadedTrajectory t = load_trajectory(trajectory_path);
    SpectrumPtr sp = io::make_spectrum(cfg, io::make_grid(cfg));
    const double A = io::resolve_A(cfg, *sp);
    const DoublingAudit audit =
        theorem11_certificate(t.series, cfg.L0, A, cfg.C0, cfg.epsilon);
    io::atomic_write(report_path("audit_theorem11"), io::doubling_audit_json(audit));
    if (cfg.wants("csv"))
      io::atomic_write(dir / "audit_theorem11_ratios.csv",
                       io::window_ratios_csv(t.series, audit.chain_constant));
    std::cout << "theorem11: verdict " << audit.verdict << ", doubling constant "
              << audit.doubling_constant << "\n";
    const bool ok = audit.prop31_violations == 0 &&
                    (!audit.bounded_branch || audit.chain_bounds_ratios);
    return ok ? kExitOk : kExitCounterexample;
  }
  if (which == "corollary12") {
    const LoadedTrajectory t = load_trajectory(trajectory_path);
    const OrderClassification c = infinite_order_classifier(t.series, cfg.K_orders);
    io::atomic_write(report_path("audit_corollary12"), io::classification_json(c));
    std::cout << "corollary12: " << c.verdict
              << (c.verdict == "finite-order" ? " k*=" + std::to_string(c.finite_order) : "")
              << "\n";
    return kExitOk;
  }
  if (which == "three-annulus") {
    SpectrumPtr sp = io::make_spectrum(cfg, io::make_grid(cfg));
    const ThreeAnnulusBattery b =
        three_annulus_battery(sp, cfg.trials, cfg.seed, cfg.battery_level, cfg.delta1);
    io::atomic_write(report_path("audit_three_annulus"), io::three_annulus_battery_json(b));
    const DichotomyBattery d =
        dichotomy_battery(sp, cfg.trials, cfg.seed, cfg.battery_level);
    io::atomic_write(report_path("audit_dichotomy"), io::dichotomy_battery_json(d));
    std::cout << "three-annulus: " << b.violations << " violations, dichotomy: "
              << d.violations << " violations\n";
    return (b.violations == 0 && d.violations == 0) ? kExitOk : kExitCounterexample;
  }
  if (which == "prop24") {
    SpectrumPtr sp = io::make_spectrum(cfg, io::make_grid(cfg));
    const Prop24Battery b =
        prop24_battery(sp, {cfg.C0}, {cfg.L0}, cfg.trials, cfg.seed, cfg.battery_level);
    io::atomic_write(report_path("audit_prop24"), io::prop24_battery_json(b));
    std::cout << "prop24: " << b.total_violations << " violations, "
              << b.total_cosh_violations << " cosh violations\n";
    return (b.total_violations + b.total_cosh_violations) == 0 ? kExitOk
                                                               : kExitCounterexample;
  }
  if (which == "duhamel") {
    SpectrumPtr sp = io::make_spectrum(cfg, io::make_grid(cfg));
    const DuhamelBattery b =
        duhamel_battery(sp, std::min(cfg.trials, 50), cfg.seed, 2, cfg.dtau);
    io::atomic_write(report_path("audit_duhamel"),
                     io::duhamel_battery_json(b, cfg.duhamel_tol));
    std::cout << "duhamel: max residual " << b.max_residual << ", empirical C "
              << b.empirical_C << "\n";
    return b.max_residual <= cfg.duhamel_tol ? kExitOk : kExitCounterexample;
  }
  throw std::invalid_argument("unknown audit '" + which + "'");
}

int cmd_sweep(const io::ExperimentConfig& cfg, const std::string& initial_base,
              const std::string& amplitudes) {
  std::vector<std::string> amps;
  std::istringstream ss(amplitudes);
  std::string a;
  while (std::getline(ss, a, ',')) {
    if (!a.empty()) amps.push_back(a);
  }
  if (amps.empty()) throw std::invalid_argument("sweep needs --amplitudes a,b,...");

  GridPtr grid = io::make_grid(cfg);
  SpectrumPtr sp = io::make_spectrum(cfg, grid);
  const fs::path dir(cfg.out_dir);
  std::ostringstream summary;
  summary << "amplitude,decay_order_tau1,abs_dev_from_1,max_unstable_fraction,halted\n";
  int idx = 0;
  for (const std::string& amp : amps) {
    const std::string spec = initial_base + " amp=" + amp;
    const RadialGraph g0 = io::parse_initial_spec(spec, grid);
    const Trajectory traj = run(g0, sp, flow_params(cfg), cfg.tau_end, cfg.sample_dtau);
    const std::string stem = "sweep_" + std::to_string(idx++);
    if (cfg.wants("csv")) io::atomic_write(dir / (stem + ".csv"), io::trajectory_csv(traj));
    if (cfg.wants("json"))
      io::atomic_write(dir / (stem + "_manifest.json"),
                       io::trajectory_manifest(traj, spec, cfg.seed, cfg.state_stride));
    double order = std::numeric_limits<double>::quiet_NaN();
    try {
      order = decay_order(traj, 1.0);
    } catch (const std::exception&) {
    }
    double max_frac = 0.0;
    for (const FlowState& st : traj.states)
      max_frac = std::max(max_frac, unstable_fraction(st.graph, *sp));
    summary << amp << ',' << io::format_double(order) << ','
            << io::format_double(std::abs(order - 1.0)) << ','
            << io::format_double(max_frac) << ',' << (traj.log.halted_infinite ? 1 : 0)
            << '\n';
  }
  io::atomic_write(dir / "sweep_summary.csv", summary.str());
  std::cout << "sweep: " << amps.size() << " runs written to " << cfg.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shrinkflow: drift-spectral estimates and rescaled-MCF audits on round shrinkers"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string initial = "zero", which, trajectory_path, amplitudes, stem = "trajectory";
  double tau_end_override = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
    sub->add_option("--format", opts.formats, "comma list: csv,json (overrides config)");
    sub->add_option("--seed", opts.seed, "RNG seed (overrides config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "write the drift-operator spectrum");
  add_common(spectrum);

  CLI::App* evolve = app.add_subcommand("evolve", "run a rescaled-flow trajectory");
  add_common(evolve);
  evolve->add_option("--initial", initial,
                     "'zero', 'mode k=K [sin] amp=A', or 'file:PATH'");
  evolve->add_option("--stem", stem, "output file stem");
  evolve->add_option("--tau-end", tau_end_override, "overrides flow.tau_end");

  CLI::App* audit = app.add_subcommand("audit", "run one of the named audits");
  add_common(audit);
  audit
      ->add_option("--which", which,
                   "monotonicity|lemma25|prop31|theorem11|corollary12|three-annulus|"
                   "prop24|duhamel")
      ->required();
  audit->add_option("--trajectory", trajectory_path, "trajectory CSV or manifest JSON");

  CLI::App* sweep = app.add_subcommand("sweep", "amplitude sweep of one mode recipe");
  add_common(sweep);
  sweep->add_option("--initial", initial, "mode recipe without amp=, e.g. 'mode k=2'");
  sweep->add_option("--amplitudes", amplitudes, "comma list of amplitudes")->required();
  sweep->add_option("--tau-end", tau_end_override, "overrides flow.tau_end");

  CLI11_PARSE(app, argc, argv);

  try {
    io::ExperimentConfig cfg = resolve_config(opts);
    if (tau_end_override > 0.0) cfg.tau_end = tau_end_override;
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (evolve->parsed()) return cmd_evolve(cfg, initial, stem);
    if (audit->parsed()) return cmd_audit(cfg, which, trajectory_path);
    if (sweep->parsed()) return cmd_sweep(cfg, initial, amplitudes);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string what = e.what();
    if (what.find("parse") != std::string::npos) return kExitUsage;
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
