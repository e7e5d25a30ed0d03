#include "shrinkflow/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shrinkflow/errors.hpp"

namespace shrinkflow::io {

using nlohmann::json;

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json dist_to_json(double d) {
  if (std::isinf(d)) return json("inf");
  return json(d);
}

double dist_from_json(const json& j) {
  if (j.is_string()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json grid_to_json(const Grid& g) {
  json j;
  if (g.kind() == Grid::Kind::Circle) {
    j["type"] = "circle";
    j["nodes"] = static_cast<int>(g.nodes());
    j["band"] = g.band();
  } else {
    j["type"] = "sphere";
    j["band"] = g.band();
    j["n_lat"] = g.n_lat();
    j["n_lon"] = g.n_lon();
  }
  return j;
}

GridPtr grid_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "circle") {
    return Grid::circle(j.at("nodes").get<int>(), j.value("band", 0));
  }
  if (type == "sphere") {
    return Grid::sphere(j.at("band").get<int>(), j.value("n_lat", 0), j.value("n_lon", 0));
  }
  throw std::runtime_error("unknown grid type '" + type + "'");
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec vec_from_json(const json& arr) {
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v(i) = arr[i].get<double>();
  return v;
}

}  // namespace

bool ExperimentConfig::wants(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("shrinker")) cfg.n = j["shrinker"].value("n", cfg.n);
  if (j.contains("spectrum")) cfg.cutoff = j["spectrum"].value("cutoff", cfg.cutoff);
  if (j.contains("flow")) {
    const json& f = j["flow"];
    cfg.grid_size = f.value("grid_size", cfg.grid_size);
    cfg.dtau = f.value("dtau", cfg.dtau);
    cfg.tau_end = f.value("tau_end", cfg.tau_end);
    cfg.sample_dtau = f.value("sample_dtau", cfg.sample_dtau);
    cfg.state_stride = f.value("state_stride", cfg.state_stride);
    cfg.c0 = f.value("c0", cfg.c0);
    cfg.epsilon = f.value("epsilon", cfg.epsilon);
  }
  if (j.contains("analysis")) {
    const json& a = j["analysis"];
    cfg.L0 = a.value("L0", cfg.L0);
    cfg.C0 = a.value("C0", cfg.C0);
    cfg.A = a.value("A", cfg.A);
    cfg.gamma0 = a.value("gamma0", cfg.gamma0);
    cfg.trials = a.value("trials", cfg.trials);
    cfg.seed = a.value("seed", cfg.seed);
    cfg.delta1 = a.value("delta1", cfg.delta1);
    cfg.K_orders = a.value("K_orders", cfg.K_orders);
    cfg.battery_level = a.value("battery_level", cfg.battery_level);
    cfg.monotonicity_tol = a.value("monotonicity_tol", cfg.monotonicity_tol);
    cfg.duhamel_tol = a.value("duhamel_tol", cfg.duhamel_tol);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    cfg.out_dir = o.value("directory", cfg.out_dir);
    if (o.contains("formats")) {
      cfg.formats.clear();
      for (const auto& f : o["formats"]) cfg.formats.push_back(f.get<std::string>());
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (cfg.n != 1 && cfg.n != 2) fail("shrinker.n must be 1 or 2");
  if (cfg.cutoff != 0 && cfg.cutoff < 4) fail("spectrum.cutoff must be >= 4");
  if (cfg.grid_size != 0 && cfg.grid_size < 16) fail("flow.grid_size must be >= 16");
  if (!(cfg.dtau > 0.0)) fail("flow.dtau must be positive");
  if (!(cfg.tau_end > 0.0)) fail("flow.tau_end must be positive");
  if (!(cfg.sample_dtau > 0.0)) fail("flow.sample_dtau must be positive");
  if (cfg.state_stride < 1) fail("flow.state_stride must be >= 1");
  if (cfg.c0 < 0.0) fail("flow.c0 must be nonnegative");
  if (!(cfg.epsilon > 0.0)) fail("flow.epsilon must be positive");
  if (!(cfg.L0 > 0.0 && cfg.L0 < 0.5)) fail("analysis.L0 must lie in (0, 1/2)");
  if (!(cfg.C0 > 1.0)) fail("analysis.C0 must exceed 1");
  if (cfg.A < 0.0) fail("analysis.A must be nonnegative");
  if (!(cfg.gamma0 > 0.0 && cfg.gamma0 < 1.0)) fail("analysis.gamma0 must lie in (0, 1)");
  if (cfg.trials < 1) fail("analysis.trials must be positive");
  if (cfg.K_orders < 1) fail("analysis.K_orders must be positive");
  for (const auto& f : cfg.formats) {
    if (f != "csv" && f != "json") fail("output.formats entries must be csv or json");
  }
}

std::string config_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["shrinker"] = {{"n", cfg.n}};
  j["spectrum"] = {{"cutoff", cfg.cutoff}};
  j["flow"] = {{"grid_size", cfg.grid_size}, {"dtau", cfg.dtau},
               {"tau_end", cfg.tau_end},     {"sample_dtau", cfg.sample_dtau},
               {"state_stride", cfg.state_stride}, {"c0", cfg.c0},
               {"epsilon", cfg.epsilon}};
  j["analysis"] = {{"L0", cfg.L0},         {"C0", cfg.C0},
                   {"A", cfg.A},           {"gamma0", cfg.gamma0},
                   {"trials", cfg.trials}, {"seed", cfg.seed},
                   {"delta1", cfg.delta1}, {"K_orders", cfg.K_orders},
                   {"battery_level", cfg.battery_level},
                   {"monotonicity_tol", cfg.monotonicity_tol},
                   {"duhamel_tol", cfg.duhamel_tol}};
  j["output"] = {{"directory", cfg.out_dir}, {"formats", cfg.formats}};
  return j.dump(2) + "\n";
}

GridPtr make_grid(const ExperimentConfig& cfg) {
  if (cfg.n == 1) {
    const int nodes = cfg.grid_size > 0 ? cfg.grid_size
                                        : std::max(256, 4 * cfg.effective_cutoff());
    return Grid::circle(nodes);
  }
  const int band = cfg.effective_cutoff() + 7;
  if (cfg.grid_size > 0) return Grid::sphere(band, cfg.grid_size, 2 * cfg.grid_size);
  return Grid::sphere(band);
}

SpectrumPtr make_spectrum(const ExperimentConfig& cfg, GridPtr grid) {
  return build_spectrum(round_shrinker(cfg.n), cfg.effective_cutoff(), std::move(grid));
}

double resolve_A(const ExperimentConfig& cfg, const Spectrum& spectrum) {
  if (cfg.A > 0.0) return cfg.A;
  const GapChoice choice = choose_gap_L(spectrum, cfg.L0, cfg.C0);
  const double A = (choice.B - 1.0) / cfg.gamma0;
  if (!(A > 0.0)) throw std::invalid_argument("derived A is not positive; set analysis.A");
  return A;
}

// ---------------- CSV ----------------

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream out;
  out << "eigenvalue,level,label\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out << format_double(s.eigenvalues()(i)) << ',' << s.level()(i) << ','
        << s.labels()[i] << '\n';
  }
  return out.str();
}

std::string mode_vector_csv(const ModeVector& a) {
  std::ostringstream out;
  out << "index,eigenvalue,coefficient\n";
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    out << i << ',' << format_double(a.spectrum->eigenvalues()(i)) << ','
        << format_double(a.a(i)) << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const Trajectory& t) {
  const TrajectorySeries s = series(t);
  const double F_sigma = t.states.front().graph.grid->shrinker().gaussian_area;
  std::ostringstream out;
  out << "tau,distance,excess,gaussian_area,decay_order,unstable_fraction\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const FlowState& st = t.states[i];
    double order = std::numeric_limits<double>::quiet_NaN();
    try {
      order = series_decay_order(s, st.tau);
    } catch (const std::exception&) {
    }
    const double frac = t.spectrum ? unstable_fraction(st.graph, *t.spectrum) : 0.0;
    out << format_double(st.tau) << ',' << format_double(st.distance) << ','
        << format_double(st.excess) << ',' << format_double(st.excess + F_sigma) << ','
        << format_double(order) << ',' << format_double(frac) << '\n';
  }
  return out.str();
}

std::string time_modes_csv(const TimeSampledModes& m) {
  std::ostringstream out;
  out << "t,index,coefficient\n";
  for (Eigen::Index j = 0; j < m.times.size(); ++j) {
    for (Eigen::Index i = 0; i < m.coeffs.cols(); ++i) {
      out << format_double(m.times(j)) << ',' << i << ','
          << format_double(m.coeffs(j, i)) << '\n';
    }
  }
  return out.str();
}

std::string window_ratios_csv(const TrajectorySeries& s, double chain_constant) {
  std::ostringstream out;
  out << "tau,ratio,bound\n";
  const double end = s.tau(s.tau.size() - 1);
  for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
    const double t = s.tau(i);
    if (t + 1.0 > end + 1e-12) break;
    const double d0 = s.dist(i);
    const double d1 = series_distance_at(s, t + 1.0);
    double ratio = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(d0) && std::isfinite(d1) && d1 > 0.0) ratio = d0 / d1;
    out << format_double(t) << ',' << format_double(ratio) << ','
        << format_double(chain_constant) << '\n';
  }
  return out.str();
}

TrajectorySeries series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory csv: empty file");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) header.push_back(field);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw std::runtime_error("trajectory csv: missing column '" + name + "'");
  };
  const int c_tau = col("tau"), c_dist = col("distance"), c_exc = col("excess");

  std::vector<double> tau, dist, exc;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) {
      char* endp = nullptr;
      const double v = std::strtod(field.c_str(), &endp);
      if (endp == field.c_str())
        throw std::runtime_error("trajectory csv: line " + std::to_string(lineno) +
                                 ": bad number '" + field + "'");
      fields.push_back(v);
    }
    if (static_cast<int>(fields.size()) <= std::max({c_tau, c_dist, c_exc}))
      throw std::runtime_error("trajectory csv: line " + std::to_string(lineno) +
                               ": too few fields");
    tau.push_back(fields[c_tau]);
    dist.push_back(fields[c_dist]);
    exc.push_back(fields[c_exc]);
  }
  if (tau.size() < 2) throw std::runtime_error("trajectory csv: need at least 2 rows");
  TrajectorySeries s;
  s.tau = Eigen::Map<Vec>(tau.data(), tau.size());
  s.dist = Eigen::Map<Vec>(dist.data(), dist.size());
  s.excess = Eigen::Map<Vec>(exc.data(), exc.size());
  return s;
}

// ---------------- JSON ----------------

std::string spectrum_json(const Spectrum& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "spectrum";
  j["shrinker"] = {{"n", s.shrinker().n}, {"radius", s.shrinker().radius}};
  j["cutoff"] = s.levels();
  j["eigenvalues"] = vec_to_json(s.eigenvalues());
  json levels = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) levels.push_back(s.level()(i));
  j["levels"] = levels;
  j["labels"] = s.labels();
  json mult = json::array();
  for (int k = 0, i = 0; i < s.size(); ++k) {
    int count = 0;
    const double mu = s.eigenvalues()(i);
    while (i < s.size() && s.level()(i) == k) {
      ++count;
      ++i;
    }
    mult.push_back({{"level", k}, {"eigenvalue", mu}, {"multiplicity", count}});
  }
  j["multiplicities"] = mult;
  j["weyl"] = {{"C1", s.weyl().C1}, {"m", s.weyl().m}, {"offset", s.weyl().offset}};
  return j.dump(2) + "\n";
}

std::string graph_json(const RadialGraph& g) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "radial_graph";
  j["shrinker"] = {{"n", g.grid->shrinker().n}, {"radius", g.grid->shrinker().radius}};
  j["grid"] = grid_to_json(*g.grid);
  j["samples"] = vec_to_json(g.heights);
  return j.dump(2) + "\n";
}

RadialGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("radial graph parse error: ") + e.what());
  }
  GridPtr grid = grid_from_json(j.at("grid"));
  Vec samples = vec_from_json(j.at("samples"));
  return make_graph(std::move(grid), std::move(samples));
}

std::string trajectory_manifest(const Trajectory& t, const std::string& initial_spec,
                                std::uint64_t seed, int state_stride) {
  const Grid& grid = *t.states.front().graph.grid;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "trajectory";
  j["shrinker"] = {{"n", grid.shrinker().n}, {"radius", grid.shrinker().radius}};
  j["grid"] = grid_to_json(grid);
  j["spectrum"] = {{"cutoff", t.spectrum ? t.spectrum->levels() : 0}};
  j["flow"] = {{"dtau", t.params.dtau},
               {"sample_dtau", t.sample_dtau},
               {"c0", effective_c0(t.params, grid.shrinker())},
               {"excess_tol", t.params.excess_tol},
               {"epsilon", t.params.epsilon}};
  j["initial"] = initial_spec;
  j["seed"] = seed;
  j["log"] = {{"accepted", t.log.accepted},
              {"rejected", t.log.rejected},
              {"halted_infinite", t.log.halted_infinite}};
  json taus = json::array(), dists = json::array(), excs = json::array(),
       heights = json::array();
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (i % state_stride != 0 && i + 1 != t.states.size()) continue;
    const FlowState& st = t.states[i];
    taus.push_back(st.tau);
    dists.push_back(dist_to_json(st.distance));
    excs.push_back(st.excess);
    heights.push_back(vec_to_json(st.graph.heights));
  }
  j["states"] = {{"stride", state_stride}, {"tau", taus},   {"distance", dists},
                 {"excess", excs},         {"heights", heights}};
  return j.dump() + "\n";
}

Trajectory trajectory_from_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("trajectory manifest parse error: ") + e.what());
  }
  if (j.value("kind", "") != "trajectory")
    throw std::runtime_error("manifest is not a trajectory (kind mismatch)");
  GridPtr grid = grid_from_json(j.at("grid"));
  Trajectory t;
  const int cutoff = j.at("spectrum").at("cutoff").get<int>();
  if (cutoff >= 4) t.spectrum = build_spectrum(grid->shrinker(), cutoff, grid);
  const json& f = j.at("flow");
  t.params.dtau = f.value("dtau", 1e-3);
  t.params.c0 = f.value("c0", 0.0);
  t.params.excess_tol = f.value("excess_tol", 1e-8);
  t.params.epsilon = f.value("epsilon", 0.05);
  t.sample_dtau = f.value("sample_dtau", 1e-3);
  const json& st = j.at("states");
  const json& taus = st.at("tau");
  const json& dists = st.at("distance");
  const json& excs = st.at("excess");
  const json& heights = st.at("heights");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    FlowState s;
    s.tau = taus[i].get<double>();
    s.distance = dist_from_json(dists[i]);
    s.excess = excs[i].get<double>();
    s.graph = make_graph(grid, vec_from_json(heights[i]));
    t.states.push_back(std::move(s));
  }
  const json& lg = j.at("log");
  t.log.accepted = lg.value("accepted", 0L);
  t.log.rejected = lg.value("rejected", 0L);
  t.log.halted_infinite = lg.value("halted_infinite", false);
  return t;
}

std::string monotonicity_json(const MonotonicityReport& r, double tol) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "monotonicity_audit";
  j["quantities"] = {{"max_defect", r.max_defect},
                     {"max_dissipation", r.max_dissipation},
                     {"interior_samples", r.defects.size()}};
  j["tolerance"] = tol;
  j["counterexample"] = (r.max_defect > tol);
  j["verdict"] = (r.max_defect <= tol) ? "ok" : "defect-exceeds-tolerance";
  return j.dump(2) + "\n";
}

std::string lemma25_json(const SemiContinuityReport& r, double epsilon) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "lemma25_audit";
  j["hypotheses"] = {{"epsilon", epsilon}};
  j["quantities"] = {{"windows_checked", r.windows_checked},
                     {"empirical_C0", r.empirical_C0}};
  j["verdict"] = r.windows_checked > 0 ? "measured" : "no-admissible-windows";
  return j.dump(2) + "\n";
}

std::string gap_choice_json(const GapChoice& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "gap_choice";
  j["L0"] = c.L0;
  j["L"] = c.L;
  j["C0"] = c.C0;
  j["B"] = c.B;
  j["gap"] = c.gap;
  j["threshold"] = c.threshold;
  j["certificate"] = c.certificate;
  j["weyl"] = {{"C1", c.weyl.C1}, {"m", c.weyl.m}, {"offset", c.weyl.offset}};
  return j.dump(2) + "\n";
}

std::string prop31_scan_json(const std::vector<Prop31Report>& reports,
                             const GapChoice& choice, double A) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "prop31_scan";
  j["A"] = A;
  j["choice"] = {{"L", choice.L}, {"L0", choice.L0}, {"C0", choice.C0}};
  int met = 0, violations = 0, degenerate = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (r.degenerate) ++degenerate;
    if (r.lemma_hypotheses_met && r.scale_hypothesis_met && r.antecedent) {
      ++met;
      min_margin = std::min(min_margin, r.margin);
    }
    if (r.violated) ++violations;
  }
  j["quantities"] = {{"windows", reports.size()},
                     {"hypotheses_met", met},
                     {"degenerate", degenerate},
                     {"min_margin", std::isfinite(min_margin) ? min_margin : 0.0}};
  j["counterexamples"] = violations;
  j["verdict"] = violations == 0 ? "no-counterexample" : "violated";
  return j.dump(2) + "\n";
}

std::string doubling_audit_json(const DoublingAudit& a) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "theorem11_audit";
  json hist = json::array();
  json scales = json::array();
  for (const auto& st : a.stages) {
    scales.push_back(st.Li);
    hist.push_back({{"index", st.index},
                    {"T", st.T},
                    {"Li", st.Li},
                    {"branch", st.decay_branch ? "decay" : "bounded-ratio"},
                    {"L_used", st.L_used},
                    {"bound", st.bound},
                    {"bound_holds", st.bound_holds}});
  }
  j["branch_history"] = hist;
  j["scale_sequence"] = scales;
  j["scale_series_total"] = a.scale_series_total;
  j["constants"] = {{"C0", a.C0}, {"A", a.A}, {"L0", a.L0},
                    {"chain_m", a.chain_m}, {"chain_constant", a.chain_constant}};
  j["doubling_constant"] = a.doubling_constant;
  j["chain_bounds_ratios"] = a.chain_bounds_ratios;
  j["prop31"] = {{"windows", a.prop31_windows}, {"violations", a.prop31_violations}};
  j["verdict"] = a.verdict;
  return j.dump(2) + "\n";
}

std::string classification_json(const OrderClassification& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "corollary12_classifier";
  j["quantities"] = {{"finite_order", c.finite_order},
                     {"max_order_checked", c.max_order_checked},
                     {"C_half", c.C_half},
                     {"C_full", c.C_full}};
  j["verdict"] = c.verdict;
  return j.dump(2) + "\n";
}

std::string three_annulus_battery_json(const ThreeAnnulusBattery& b) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "three_annulus_battery";
  j["hypotheses"] = {{"delta1", b.delta1}};
  j["quantities"] = {{"trials", b.trials},
                     {"hypothesis_met", b.hypothesis_met},
                     {"min_improvement", b.min_improvement}};
  j["counterexamples"] = b.violations;
  j["verdict"] = b.violations == 0 ? "no-counterexample" : "violated";
  return j.dump(2) + "\n";
}

std::string dichotomy_battery_json(const DichotomyBattery& b) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "dichotomy_battery";
  j["hypotheses"] = {{"certified_delta", b.certified_delta}};
  j["quantities"] = {{"trials", b.trials}, {"min_achieved", b.min_achieved}};
  j["counterexamples"] = b.violations;
  j["verdict"] = b.violations == 0 ? "no-counterexample" : "violated";
  return j.dump(2) + "\n";
}

std::string prop24_battery_json(const Prop24Battery& b) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "prop24_battery";
  json settings = json::array();
  for (const auto& s : b.settings) {
    settings.push_back({{"C0", s.C0},
                        {"L0", s.L0},
                        {"L", s.choice.L},
                        {"B", s.choice.B},
                        {"gap", s.choice.gap},
                        {"trials", s.trials},
                        {"violations", s.violations},
                        {"cosh_violations", s.cosh_violations},
                        {"min_margin", s.min_margin}});
  }
  j["settings"] = settings;
  j["counterexamples"] = b.total_violations + b.total_cosh_violations;
  j["verdict"] =
      (b.total_violations + b.total_cosh_violations) == 0 ? "no-counterexample" : "violated";
  return j.dump(2) + "\n";
}

std::string duhamel_battery_json(const DuhamelBattery& b, double tol) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "duhamel_battery";
  j["quantities"] = {{"trials", b.trials},
                     {"max_residual", b.max_residual},
                     {"empirical_C", b.empirical_C},
                     {"dt", b.dt}};
  j["tolerance"] = tol;
  j["counterexample"] = (b.max_residual > tol);
  j["verdict"] = (b.max_residual <= tol) ? "ok" : "residual-exceeds-tolerance";
  return j.dump(2) + "\n";
}

std::string logconvexity_battery_json(const LogConvexityBattery& b) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "logconvexity_battery";
  j["quantities"] = {{"trials", b.trials},
                     {"min_second_diff", b.min_second_diff},
                     {"single_level_trials", b.single_level_trials},
                     {"max_single_level_dev", b.max_single_level_dev}};
  j["counterexamples"] = b.violations;
  j["verdict"] = b.violations == 0 ? "no-counterexample" : "violated";
  return j.dump(2) + "\n";
}

RadialGraph parse_initial_spec(const std::string& spec, GridPtr grid) {
  if (spec == "zero") return zero_graph(std::move(grid));
  if (spec.rfind("file:", 0) == 0) {
    RadialGraph g = graph_from_json(read_file(spec.substr(5)));
    if (g.grid->nodes() != grid->nodes() || g.grid->kind() != grid->kind())
      throw DimensionError("samples file grid does not match the configured grid");
    return make_graph(std::move(grid), std::move(g.heights));
  }
  std::istringstream ss(spec);
  std::string word;
  ss >> word;
  if (word != "mode")
    throw std::invalid_argument("initial spec must be 'zero', 'mode ...' or 'file:PATH'");
  int k = -1, m = 0;
  bool want_sin = false;
  double amp = std::numeric_limits<double>::quiet_NaN();
  while (ss >> word) {
    if (word.rfind("k=", 0) == 0) k = std::stoi(word.substr(2));
    else if (word.rfind("m=", 0) == 0) m = std::stoi(word.substr(2));
    else if (word.rfind("amp=", 0) == 0) amp = std::stod(word.substr(4));
    else if (word == "sin") want_sin = true;
    else if (word == "cos") want_sin = false;
    else throw std::invalid_argument("initial spec: unknown token '" + word + "'");
  }
  if (k < 0 || !std::isfinite(amp))
    throw std::invalid_argument("initial spec: need k= and amp=");
  if (grid->kind() == Grid::Kind::Circle) m = k;
  // locate the reference mode (k, m, parity)
  for (Eigen::Index i = 0; i < grid->modes(); ++i) {
    if (grid->mode_level()(i) != k || grid->mode_order()(i) != m) continue;
    const bool is_sin = grid->mode_partner()(i) < i;
    if ((m == 0) || (is_sin == want_sin)) {
      return make_graph(grid, amp * grid->basis_values().col(i));
    }
  }
  throw std::invalid_argument("initial spec: mode (k=" + std::to_string(k) +
                              ", m=" + std::to_string(m) + ") not resolved by the grid");
}

}  // namespace shrinkflow::io
