#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fourlevel/scenario.hpp"
#include "fourlevel/verify.hpp"

using namespace fourlevel;
namespace fs = std::filesystem;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fourlevel_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ScenarioConfig small_run(const std::string& prefix) {
  ScenarioConfig c = preset("fig1-3");
  c.t_max_cycles = 0.5;
  c.n_samples = 41;
  c.oracle_tol = 1e-7;
  c.output_prefix = prefix;
  return c;
}

}  // namespace

TEST(Config, ParsesAllKeys) {
  const ScenarioConfig c = parse(R"(# comment
name = test
modulation = harmonic
e00_minus_e10_ghz = 7.85
e00_plus_e10_ghz = 1.0   # trailing comment
ej1_amp_ghz = 13.4
ej2_amp_ghz = 9.1
mod_omega_ghz = 2
delta_rad = 0.785
gamma_ghz = 0.5
t_max_cycles = 3
n_samples = 101
initial_state = 2
output_prefix = out/run
solver_tol = 1e-10
oracle_tol = 1e-7
run_oracle = false
)");
  EXPECT_EQ(c.name, "test");
  EXPECT_DOUBLE_EQ(c.params.E00, 4.425);
  EXPECT_DOUBLE_EQ(c.params.E10, -3.425);
  EXPECT_DOUBLE_EQ(c.params.mod_omega, 2.0);
  EXPECT_EQ(c.params.modulation, Modulation::Harmonic);
  EXPECT_DOUBLE_EQ(c.gamma, 0.5);
  EXPECT_EQ(c.n_samples, 101);
  EXPECT_EQ(c.initial_state, 2);
  EXPECT_EQ(c.output_prefix, "out/run");
  EXPECT_FALSE(c.run_oracle);
  EXPECT_DOUBLE_EQ(c.times().back(), 3.0 * std::numbers::pi);
}

TEST(Config, ExplicitInitialRho) {
  const ScenarioConfig c = parse(
      "initial_rho_re = 0.5,0,0,0, 0,0.5,0,0, 0,0,0,0, 0,0,0,0\n"
      "initial_rho_im = 0,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0\n");
  ASSERT_TRUE(c.initial_rho);
  EXPECT_DOUBLE_EQ(c.initial_density().mat()(1, 1).real(), 0.5);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse("gamma_ghz = abc\n"), ConfigError);
  EXPECT_THROW(parse("gamma_ghz = 1x\n"), ConfigError);
  EXPECT_THROW(parse("gamma_ghz = -1\n"), ConfigError);
  EXPECT_THROW(parse("n_samples = 1\n"), ConfigError);
  EXPECT_THROW(parse("n_samples = 2.5\n"), ConfigError);
  EXPECT_THROW(parse("t_max_cycles = 0\n"), ConfigError);
  EXPECT_THROW(parse("initial_state = 5\n"), ConfigError);
  EXPECT_THROW(parse("modulation = square\n"), ConfigError);
  EXPECT_THROW(parse("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse("gamma_ghz = 1\ngamma_ghz = 2\n"), ConfigError);
  EXPECT_THROW(parse("initial_rho_re = 1,0,0\n"), ConfigError);
  EXPECT_THROW(parse("initial_rho_re = 2,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,-1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
  EXPECT_THROW(preset("fig10"), ConfigError);
}

TEST(Presets, PaperParameters) {
  const ScenarioConfig a = preset("fig1-3");
  EXPECT_DOUBLE_EQ(a.params.E00 - a.params.E10, 7.85);
  EXPECT_DOUBLE_EQ(a.params.E00 + a.params.E10, 0.0);
  EXPECT_DOUBLE_EQ(a.params.EJ1_amp, 13.4);
  EXPECT_DOUBLE_EQ(a.params.EJ2_amp, 9.1);
  EXPECT_EQ(a.n_samples, 2001);
  EXPECT_DOUBLE_EQ(a.t_max_cycles, 5.0);
  EXPECT_DOUBLE_EQ(preset("fig4-6").params.delta, std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(preset("fig7-9").gamma, 0.5);
}

TEST(Scenario, WritesCsvFilesWithHeaders) {
  const fs::path dir = scratch_dir("csv");
  const ScenarioResult r = run_scenario(small_run((dir / "run").string()));
  ASSERT_TRUE(r.oracle);
  EXPECT_LT(r.oracle->max_dev, 1e-6);
  EXPECT_TRUE(r.oracle_ok());
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  const std::string diag = slurp(dir / "run_diag.csv");
  EXPECT_EQ(diag.substr(0, diag.find('\n')), "x,rho11,rho22,rho33,rho44");
  EXPECT_EQ(lines(diag), 42);
  EXPECT_EQ(slurp(dir / "run_offdiag_re.csv").substr(0, 30), "x,re12,re13,re14,re23,re24,re3");
  EXPECT_EQ(slurp(dir / "run_offdiag_im.csv").substr(0, 12), "x,im12,im13,");
  EXPECT_EQ(slurp(dir / "run_entropy.csv").substr(0, 4), "x,S\n");
  const auto report = nlohmann::json::parse(slurp(dir / "run_report.json"));
  EXPECT_TRUE(report["oracle"]["passed"].get<bool>());
  EXPECT_GE(report["segment_count"].get<int>(), 1);
  EXPECT_TRUE(report.contains("wall_time_s"));
  EXPECT_TRUE(report["conventions"].contains("e00_plus_e10"));
}

TEST(Scenario, DiagonalsSumToOne) {
  ScenarioConfig c = small_run("");
  c.run_oracle = false;
  const ScenarioResult r = run_scenario(c);
  for (const auto& rho : r.rho) EXPECT_NEAR(rho.mat().trace().real(), 1.0, 1e-8);
}

TEST(Scenario, BitwiseDeterministicOutput) {
  const fs::path dir = scratch_dir("det");
  ScenarioConfig c = small_run((dir / "a").string());
  c.run_oracle = false;
  c.gamma = 0.5;
  run_scenario(c);
  c.output_prefix = (dir / "b").string();
  run_scenario(c);
  for (const char* s : {"_diag.csv", "_offdiag_re.csv", "_offdiag_im.csv", "_entropy.csv"})
    EXPECT_EQ(slurp(dir / (std::string("a") + s)), slurp(dir / (std::string("b") + s))) << s;
}

TEST(Scenario, UnwritablePrefixIsAnOutputError) {
  const fs::path dir = scratch_dir("unwritable");
  std::ofstream(dir / "file") << "x";
  ScenarioConfig c = small_run((dir / "file" / "sub" / "run").string());
  c.run_oracle = false;
  EXPECT_ANY_THROW(run_scenario(c));
}

TEST(Verify, PristineRunPassesWithFifteenZeroPatternChecks) {
  const VerifyReport rep = run_verify();
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
  const auto n = std::count_if(rep.checks.begin(), rep.checks.end(),
                               [](const Check& c) { return c.name.rfind("zero-pattern", 0) == 0; });
  EXPECT_EQ(n, 15);
  EXPECT_EQ(verify_json(rep)["checks"].size(), rep.checks.size());
}

TEST(Verify, CorruptedReferenceFails) {
  CommutatorTable bad = reference_commutator_table();
  bad.entry(2, 5) = TableEntry{Complex(0, -1), 6};
  const VerifyReport rep = run_verify(bad);
  EXPECT_FALSE(rep.passed());
  ASSERT_EQ(rep.table_mismatches.size(), 1u);
  EXPECT_EQ(rep.table_mismatches[0].i, 2);
  EXPECT_EQ(rep.table_mismatches[0].j, 5);
}
