// scenario.hpp - declarative scenario configs, named presets and the trajectory runner

#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fourlevel/dynamics.hpp"
#include "fourlevel/integrator.hpp"
#include "fourlevel/model.hpp"
#include "fourlevel/oracle.hpp"

namespace fourlevel {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output files could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string name = "custom";
  JosephsonParams params;
  double gamma = 0.0;
  double t_max_cycles = 5.0;
  int n_samples = 2001;
  int initial_state = 1;                  // basis index 1..4, used when initial_rho is empty
  std::optional<Matrix4> initial_rho;     // explicit rho(0)
  std::string output_prefix;              // empty: no files written
  double solver_tol = 1e-11;
  double oracle_tol = 1e-8;
  bool run_oracle = true;

  void validate() const {
    try {
      params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!(params.mod_omega > 0.0)) throw ConfigError("mod_omega_ghz must be > 0 (it sets the time axis)");
    if (!(gamma >= 0.0)) throw ConfigError("gamma_ghz must be >= 0");
    if (!(t_max_cycles > 0.0)) throw ConfigError("t_max_cycles must be > 0");
    if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
    if (!(solver_tol > 0.0) || !(oracle_tol > 0.0)) throw ConfigError("tolerances must be > 0");
    try {
      (void)initial_density();
    } catch (const DensityMatrixError& e) {
      throw ConfigError(std::string("initial state: ") + e.what());
    }
  }

  DensityMatrix initial_density() const {
    return initial_rho ? DensityMatrix(*initial_rho) : DensityMatrix::pure(initial_state);
  }

  /// Sample times in ns; the plotting axis is x = w t / 2pi, uniform on [0, t_max_cycles].
  std::vector<double> axis() const {
    std::vector<double> x(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) x[i] = t_max_cycles * i / (n_samples - 1);
    return x;
  }
  std::vector<double> times() const {
    std::vector<double> t = axis();
    for (double& v : t) v *= 2.0 * std::numbers::pi / params.mod_omega;
    return t;
  }
};

/// Parameters shared by the three figure presets. E00 + E10 is not fixed by the model
/// and only shifts the global phase, so it defaults to 0.
inline ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  c.params.E00 = 0.5 * 7.85;
  c.params.E10 = -0.5 * 7.85;
  c.params.EJ1_amp = 13.4;
  c.params.EJ2_amp = 9.1;
  c.params.mod_omega = 1.0;
  c.params.modulation = Modulation::Harmonic;
  c.initial_state = 1;
  if (name == "fig1-3") return c;
  if (name == "fig4-6") {
    c.params.delta = std::numbers::pi / 4.0;
    return c;
  }
  if (name == "fig7-9") {
    c.gamma = 0.5;
    return c;
  }
  if (name == "constant") {
    c.params.modulation = Modulation::Constant;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig1-3, fig4-6, fig7-9 or constant)");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(v);
  while (std::getline(in, tok, ',')) out.push_back(parse_double(key, trim(tok)));
  return out;
}

}  // namespace detail

/// Flat "key = value" text; '#' starts a comment. Energies are in GHz used as rad/ns.
inline ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig c;
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = detail::trim(line.substr(eq + 1));
  }

  double diff = 0.0, sum = 0.0;
  std::vector<double> rho_re, rho_im;
  for (const auto& [key, value] : kv) {
    auto num = [&] { return detail::parse_double(key, value); };
    if (key == "name") c.name = value;
    else if (key == "modulation") {
      if (value == "harmonic") c.params.modulation = Modulation::Harmonic;
      else if (value == "constant") c.params.modulation = Modulation::Constant;
      else throw ConfigError("modulation must be 'harmonic' or 'constant'");
    }
    else if (key == "e00_minus_e10_ghz") diff = num();
    else if (key == "e00_plus_e10_ghz") sum = num();
    else if (key == "ej1_amp_ghz") c.params.EJ1_amp = num();
    else if (key == "ej2_amp_ghz") c.params.EJ2_amp = num();
    else if (key == "mod_omega_ghz") c.params.mod_omega = num();
    else if (key == "delta_rad") c.params.delta = num();
    else if (key == "gamma_ghz") c.gamma = num();
    else if (key == "t_max_cycles") c.t_max_cycles = num();
    else if (key == "n_samples") {
      const double n = num();
      if (n != std::floor(n) || n < 0 || n > 1e8) throw ConfigError("n_samples must be a non-negative integer");
      c.n_samples = static_cast<int>(n);
    }
    else if (key == "initial_state") {
      const double n = num();
      if (n != std::floor(n) || n < 1 || n > 4) throw ConfigError("initial_state must be 1..4");
      c.initial_state = static_cast<int>(n);
    }
    else if (key == "initial_rho_re") rho_re = detail::parse_list(key, value);
    else if (key == "initial_rho_im") rho_im = detail::parse_list(key, value);
    else if (key == "output_prefix") c.output_prefix = value;
    else if (key == "solver_tol") c.solver_tol = num();
    else if (key == "oracle_tol") c.oracle_tol = num();
    else if (key == "run_oracle") {
      if (value != "true" && value != "false") throw ConfigError("run_oracle must be true or false");
      c.run_oracle = value == "true";
    }
    else throw ConfigError("unknown key '" + key + "'");
  }
  c.params.E00 = 0.5 * (sum + diff);
  c.params.E10 = 0.5 * (sum - diff);
  if (!rho_re.empty() || !rho_im.empty()) {
    if (rho_re.size() != 16 || (!rho_im.empty() && rho_im.size() != 16))
      throw ConfigError("initial_rho_re / initial_rho_im need 16 row-major entries");
    Matrix4 m;
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = Complex(rho_re[i], rho_im.empty() ? 0.0 : rho_im[i]);
    c.initial_rho = m;
  }
  c.validate();
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<double> x;  // w t / 2pi
  std::vector<double> t;
  std::vector<DensityMatrix> rho;
  std::vector<double> entropy;
  double unitarity_max_defect = 0.0;
  std::size_t segment_count = 0;
  std::optional<PropagatorDeviation> oracle;
  int oracle_levels = 0;
  double oracle_step = 0.0;
  double wall_time_s = 0.0;

  /// Deviation above which a run is flagged.
  static constexpr double kOracleFlag = 1e-5;
  bool oracle_ok() const { return !oracle || oracle->max_dev <= kOracleFlag; }
};

namespace detail {

template <typename Row>
void write_csv(const std::filesystem::path& path, const std::string& header, std::size_t rows, Row&& row) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  out << header << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    const std::vector<double> vals = row(i);
    for (std::size_t k = 0; k < vals.size(); ++k) out << (k ? "," : "") << vals[k];
    out << '\n';
  }
  if (!out) throw OutputError("error while writing '" + path.string() + "'");
}

}  // namespace detail

inline nlohmann::json report_json(const ScenarioResult& r) {
  const auto& p = r.config.params;
  nlohmann::json j;
  j["scenario"] = r.config.name;
  j["params"] = {{"e00_ghz", p.E00},
                 {"e10_ghz", p.E10},
                 {"ej1_amp_ghz", p.EJ1_amp},
                 {"ej2_amp_ghz", p.EJ2_amp},
                 {"mod_omega_ghz", p.mod_omega},
                 {"delta_rad", p.delta},
                 {"modulation", p.modulation == Modulation::Harmonic ? "harmonic" : "constant"},
                 {"gamma_ghz", r.config.gamma},
                 {"t_max_cycles", r.config.t_max_cycles},
                 {"n_samples", r.config.n_samples},
                 {"solver_tol", r.config.solver_tol}};
  j["conventions"] = {
      {"units", "hbar = 1; GHz values used as rad/ns; time in ns; x = omega t / 2pi"},
      {"e00_plus_e10", "defaults to 0 unless configured; shifts only the global phase"}};
  j["segment_count"] = r.segment_count;
  j["unitarity_max_defect"] = r.unitarity_max_defect;
  if (r.oracle) {
    j["oracle"] = {{"max_deviation", r.oracle->max_dev},
                   {"argmax_t_ns", r.oracle->argmax_t},
                   {"levels", r.oracle_levels},
                   {"step_ns", r.oracle_step},
                   {"tolerance", r.config.oracle_tol},
                   {"flag_threshold", ScenarioResult::kOracleFlag},
                   {"passed", r.oracle_ok()}};
  } else {
    j["oracle"] = nullptr;
  }
  j["final_entropy"] = r.entropy.empty() ? 0.0 : r.entropy.back();
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

/// Writes <prefix>_diag.csv, _offdiag_re.csv, _offdiag_im.csv, _entropy.csv and _report.json.
inline void write_outputs(const ScenarioResult& r, const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  const auto file = [&prefix](const char* suffix) { return std::filesystem::path(prefix + suffix); };
  const std::size_t n = r.x.size();
  detail::write_csv(file("_diag.csv"), "x,rho11,rho22,rho33,rho44", n, [&](std::size_t i) {
    const Matrix4& m = r.rho[i].mat();
    return std::vector<double>{r.x[i], m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()};
  });
  for (const bool imag : {false, true}) {
    const std::string tag = imag ? "im" : "re";
    std::string header = "x";
    for (const auto& [a, b] : kOffDiagonalPairs)
      header += "," + tag + std::to_string(a + 1) + std::to_string(b + 1);
    detail::write_csv(file(imag ? "_offdiag_im.csv" : "_offdiag_re.csv"), header, n, [&](std::size_t i) {
      std::vector<double> row{r.x[i]};
      for (const auto& [a, b] : kOffDiagonalPairs) {
        const Complex v = r.rho[i].mat()(a, b);
        row.push_back(imag ? v.imag() : v.real());
      }
      return row;
    });
  }
  detail::write_csv(file("_entropy.csv"), "x,S", n,
                    [&](std::size_t i) { return std::vector<double>{r.x[i], r.entropy[i]}; });
  std::ofstream rep(file("_report.json"));
  if (!rep) throw OutputError("cannot write report for prefix '" + prefix + "'");
  rep << report_json(r).dump(2) << '\n';
}

/// Unitary integration, optional oracle comparison, density evolution, damping, entropy.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult r;
  r.config = cfg;
  r.x = cfg.axis();
  r.t = cfg.times();

  EvolveOptions opt;
  opt.tol = cfg.solver_tol;
  const SegmentedEvolution ev = evolve(cfg.params, r.t, opt);
  r.segment_count = ev.segments.size();
  for (const Matrix4& u : ev.U) r.unitarity_max_defect = std::max(r.unitarity_max_defect, unitarity_defect(u));

  if (cfg.run_oracle) {
    OracleOptions oo;
    oo.tol = cfg.oracle_tol;
    const JosephsonParams p = cfg.params;
    const OracleResult orc = propagate_direct([p](double t) { return josephson_hamiltonian(p, t); }, r.t, oo);
    r.oracle = compare_propagators(PropagatorSamples{ev.t, ev.U}, orc.samples);
    r.oracle_levels = orc.levels;
    r.oracle_step = orc.step;
  }

  r.rho = apply_uniform_damping(evolve_density(ev.U, cfg.initial_density()), r.t, cfg.gamma);
  r.entropy.reserve(r.rho.size());
  for (const auto& rho : r.rho) r.entropy.push_back(von_neumann_entropy(rho));
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!cfg.output_prefix.empty()) write_outputs(r, cfg.output_prefix);
  return r;
}

}  // namespace fourlevel
