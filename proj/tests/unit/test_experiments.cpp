#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "rkctl/config.hpp"
#include "rkctl/csv.hpp"
#include "rkctl/errors.hpp"
#include "rkctl/experiments.hpp"

using namespace rkctl;
using namespace rkctl::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rkctl_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, SectionsCommentsAndFallback) {
  const auto c = Config::parse(
      "seed = 11 # trailing\n; whole line\n[plateau]\nmethod = SSP3_4\ntols = 1e-4, 1e-5 1e-6\n"
      "[spectra]\nalpha=0.5\n");
  EXPECT_EQ(c.get_int("seed", "", 0), 11);
  EXPECT_EQ(c.get_string("method", "plateau", "x"), "SSP3_4");
  EXPECT_EQ(c.get_string("method", "spectra", "x"), "x");
  EXPECT_EQ(c.get_int("seed", "plateau", 0), 11);
  EXPECT_EQ(c.get_list("tols", "plateau", {}), (std::vector<double>{1e-4, 1e-5, 1e-6}));
  EXPECT_EQ(c.get_double("alpha", "spectra", 0.0), 0.5);
}

TEST(Config, MalformedInputIsConfigError) {
  EXPECT_THROW((void)Config::parse("[open\n"), ConfigError);
  EXPECT_THROW((void)Config::parse("novalue\n"), ConfigError);
  EXPECT_THROW((void)Config::parse("= 3\n"), ConfigError);
  const auto c = Config::parse("a = x\nb = 2.5\nc = maybe\n");
  EXPECT_THROW((void)c.get_double("a", "", 0.0), ConfigError);
  EXPECT_THROW((void)c.get_int("b", "", 0), ConfigError);
  EXPECT_THROW((void)c.get_bool("c", "", false), ConfigError);
  EXPECT_THROW((void)Config::load("/nonexistent/rkctl.cfg"), IoError);
}

TEST(Config, OverridesAndCanonicalHash) {
  auto a = Config::parse("x = 1\n[s]\ny = 2\n");
  auto b = Config::parse("[s]\ny = 2\n", "b");
  b.set("x", "1");
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  a.apply_override("s.y=3");
  EXPECT_EQ(a.get_int("y", "s", 0), 3);
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_THROW(a.apply_override("justakey"), ConfigError);
  // Reference FNV-1a values.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Csv, FormatRoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(csv::format(v)), v);
}

TEST(Csv, TableRoundTrip) {
  csv::Table t;
  t.header = {"a", "b"};
  t.add_numbers({1.5, -2.0});
  t.add_row({"x", "y"});
  EXPECT_THROW(t.add_row({"only"}), ContractViolation);
  const auto back = csv::parse(t.to_string());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  const auto dir = scratch("csv");
  csv::write_text(dir / "nested" / "t.csv", t.to_string());
  EXPECT_EQ(csv::read_text(dir / "nested" / "t.csv"), t.to_string());
  fs::remove_all(dir);
}

TEST(Problems, UnknownNamesAreConfigErrors) {
  ProblemSpec s;
  s.problem = "burgers";
  EXPECT_THROW((void)make_problem(s), ConfigError);
  s.problem = "euler1d";
  s.initial = "vortex";
  EXPECT_THROW((void)make_problem(s), ConfigError);
  EXPECT_THROW((void)normalize_experiment("dune"), ConfigError);
  EXPECT_EQ(normalize_experiment("exner-eigen"), "exner_eigen");
}

TEST(Problems, ErrorAndCflRunsObeyCountingIdentities) {
  ProblemSpec s;
  s.problem = "advection1d";
  s.elements = 8;
  s.t_end = 1.0;
  const auto p = make_problem(s);
  for (const char* m : {"BS3_3F", "SSP3_4"}) {
    const auto tab = builtin(m);
    const auto e = run_error_control(p, tab, ControllerConfig::for_method(m, 1e-5));
    ASSERT_FALSE(e.crashed) << e.message;
    EXPECT_EQ(e.stats.n_fe, expected_function_evaluations(tab.stages(), tab.fsal(),
                                                          ControlKind::error_based,
                                                          e.stats.n_accepted, e.stats.n_rejected));
    const auto c = run_cfl_control(p, tab, 0.5);
    ASSERT_FALSE(c.crashed) << c.message;
    EXPECT_EQ(c.stats.n_fe, expected_function_evaluations(tab.stages(), tab.fsal(),
                                                          ControlKind::cfl_based,
                                                          c.stats.n_accepted, 0));
    EXPECT_EQ(summary_line(c).substr(0, std::string(m).size() + 5), std::string(m) + ",0.5,");
  }
}

TEST(Problems, CrashedRunKeepsPartialCounts) {
  ProblemSpec s;
  s.problem = "advection1d";
  s.elements = 8;
  s.t_end = 20.0;
  const auto p = make_problem(s);
  const auto r = run_cfl_control(p, builtin("BS3_3F"), 3.0);
  EXPECT_TRUE(r.crashed);
  EXPECT_FALSE(r.message.empty());
  EXPECT_GT(r.stats.n_accepted, 0);
  EXPECT_LT(r.t_final, s.t_end);
  EXPECT_EQ(r.stats.n_fe, 3 * r.stats.n_accepted + 1);
}

TEST(Problems, BisectionBracketsTheCrash) {
  ProblemSpec s;
  s.problem = "advection1d";
  s.elements = 8;
  s.t_end = 5.0;
  const auto p = make_problem(s);
  const auto tab = builtin("SSP3_4");
  const auto b = bisect_problem_cfl(p, tab, 0.05, 5.0);
  EXPECT_LT(b.nu_crash / b.nu_max, 1.005);
  EXPECT_FALSE(run_cfl_control(p, tab, b.nu_max).crashed);
  EXPECT_TRUE(run_cfl_control(p, tab, b.nu_crash).crashed);
}

TEST(Convergence, OrdersOfBuiltins) {
  for (const char* m : {"BS3_3F", "SSP3_4"}) {
    const auto tab = builtin(m);
    const auto rows = run_convergence(tab, 5);
    ASSERT_EQ(rows.size(), 10u);
    for (const auto& r : rows) {
      if (std::isnan(r.order)) continue;
      const double want = r.solution == "main" ? tab.order_q() : tab.order_q_hat();
      EXPECT_NEAR(r.order, want, r.solution == "main" ? 0.2 : 0.3) << m << " " << r.solution;
    }
  }
}

TEST(Experiments, RunAllWritesManifest) {
  const auto dir = scratch("all");
  const auto cfg = Config::parse(
      "experiments = exner-eigen convergence\nseed = 3\n[convergence]\nlevels = 3\n"
      "[exner_eigen]\nsweep = true\nh_values = 1 10\nv1_values = 0 1\nag_values = 0 0.001\n");
  const auto out = run_all(cfg, dir);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "exner_eigen" / "exner.csv"));
  const auto exner = csv::parse(csv::read_text(dir / "exner_eigen" / "exner.csv"));
  EXPECT_EQ(exner.rows.size(), 8u);
  const auto manifest = csv::read_text(dir / "manifest.txt");
  EXPECT_NE(manifest.find("config_hash " + cfg.hash()), std::string::npos);
  EXPECT_NE(manifest.find("seed 3"), std::string::npos);
  EXPECT_NE(manifest.find("outputs 2"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Experiments, SpectraReportsBothOperators) {
  ProblemSpec s;
  s.problem = "blended_advection";
  s.dimension = 1;
  s.elements = 6;
  s.alpha = 0.5;
  const auto r = run_spectra(s, builtin("SSP3_4"));
  EXPECT_EQ(r.dg.eigenvalues.size(), r.sc.eigenvalues.size());
  EXPECT_GT(r.dg.sigma_star, 0.0);
  EXPECT_GT(r.sc.sigma_star, 0.0);
  EXPECT_LT(r.dg.spot_check_residual, 1e-8);
  EXPECT_LT(r.sc.spot_check_residual, 1e-8);
  for (auto z : r.sc_outside)
    EXPECT_GT(std::abs(stability_function(builtin("SSP3_4"), r.dg.sigma_star * z)), 1.0);
}
