// fourlevel - command line front end: verify, evolve, export-table

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fourlevel/algebra.hpp"
#include "fourlevel/integrator.hpp"
#include "fourlevel/oracle.hpp"
#include "fourlevel/scenario.hpp"
#include "fourlevel/verify.hpp"

namespace {

enum Exit : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kSolverError = 3 };

int cmd_verify(const std::string& reference_path, const std::string& report_path) {
  std::optional<fourlevel::CommutatorTable> reference;
  if (!reference_path.empty()) {
    std::ifstream in(reference_path);
    if (!in) throw fourlevel::ConfigError("cannot open reference table '" + reference_path + "'");
    try {
      reference = fourlevel::read_table_csv(in);
    } catch (const fourlevel::TableError& e) {
      throw fourlevel::ConfigError(std::string("reference table: ") + e.what());
    }
  }
  const fourlevel::VerifyReport rep = fourlevel::run_verify(reference);
  for (const auto& c : rep.checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
    std::cout << '\n';
  }
  std::cout << rep.checks.size() - rep.failures() << "/" << rep.checks.size() << " checks passed\n";
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw fourlevel::OutputError("cannot write '" + report_path + "'");
    out << fourlevel::verify_json(rep).dump(2) << '\n';
  }
  return rep.passed() ? kOk : kVerificationFailed;
}

struct EvolveArgs {
  std::string config;
  std::string preset;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::string out;
  bool no_oracle = false;
};

int cmd_evolve(const EvolveArgs& a) {
  fourlevel::ScenarioConfig cfg =
      a.config.empty() ? fourlevel::preset(a.preset) : fourlevel::load_config(a.config);
  if (a.gamma) cfg.gamma = *a.gamma;
  if (a.delta) cfg.params.delta = *a.delta;
  if (!a.out.empty()) cfg.output_prefix = a.out;
  if (cfg.output_prefix.empty()) cfg.output_prefix = cfg.name;
  if (a.no_oracle) cfg.run_oracle = false;
  cfg.validate();

  const fourlevel::ScenarioResult r = fourlevel::run_scenario(cfg);
  std::cout << "scenario " << cfg.name << ": " << r.t.size() << " samples, " << r.segment_count
            << " segments, unitarity defect " << r.unitarity_max_defect;
  if (r.oracle) std::cout << ", oracle deviation " << r.oracle->max_dev;
  std::cout << ", " << r.wall_time_s << " s\nwrote " << cfg.output_prefix << "_{diag,offdiag_re,offdiag_im,entropy}.csv and "
            << cfg.output_prefix << "_report.json\n";
  if (!r.oracle_ok()) {
    std::cerr << "oracle deviation " << r.oracle->max_dev << " exceeds " << fourlevel::ScenarioResult::kOracleFlag
              << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_export(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw fourlevel::OutputError("cannot write '" + path + "'");
  fourlevel::write_table_csv(out, fourlevel::compute_commutator_table(fourlevel::build_operator_basis()));
  if (!out) throw fourlevel::OutputError("error while writing '" + path + "'");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fourlevel: unitary integration of two coupled Josephson qubits"};
  app.require_subcommand(1);

  std::string reference_path, report_path;
  auto* verify = app.add_subcommand("verify", "run the algebraic verification suite");
  verify->add_option("--reference", reference_path, "commutator-table CSV to check against");
  verify->add_option("--report", report_path, "write a JSON report here");

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "run a scenario and write CSV trajectories");
  auto* cfg_opt = evolve->add_option("--config", ev.config, "scenario config file");
  auto* preset_opt = evolve->add_option("--preset", ev.preset, "fig1-3, fig4-6, fig7-9 or constant");
  cfg_opt->excludes(preset_opt);
  evolve->add_option("--gamma", ev.gamma, "damping rate (1/ns)");
  evolve->add_option("--delta", ev.delta, "phase between the two drives (rad)");
  evolve->add_option("--out", ev.out, "output path prefix");
  evolve->add_flag("--no-oracle", ev.no_oracle, "skip the brute-force comparison");

  std::string table_out;
  auto* exp = app.add_subcommand("export-table", "write the computed commutator table as CSV");
  exp->add_option("--out", table_out, "output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*verify) return cmd_verify(reference_path, report_path);
    if (*evolve) {
      if (ev.config.empty() && ev.preset.empty()) throw fourlevel::ConfigError("evolve needs --config or --preset");
      return cmd_evolve(ev);
    }
    if (*exp) return cmd_export(table_out);
  } catch (const fourlevel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fourlevel::OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fourlevel::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverError;
  } catch (const fourlevel::OracleError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverError;
  } catch (const fourlevel::NumericalError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverError;
  }
  return kOk;
}
