// rkctl: experiment driver.
//
//   rkctl <experiment> [--config FILE] [--out DIR] [key=value ...]
//
// Exit status: 0 success, 2 blow-up, 3 configuration error, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rkctl/config.hpp"
#include "rkctl/csv.hpp"
#include "rkctl/errors.hpp"
#include "rkctl/experiments.hpp"
#include "rkctl/tableau.hpp"
#include "rkctl/version.hpp"

namespace fs = std::filesystem;
using namespace rkctl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBlowUp = 2;
constexpr int kExitConfig = 3;

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key=value configuration file");
  cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  cmd->add_option("overrides", c.overrides, "key=value overrides");
}

Config load_config(const Common& c) {
  Config cfg = c.config_path.empty() ? Config{} : Config::load(c.config_path);
  for (const auto& o : c.overrides) cfg.apply_override(o);
  return cfg;
}

// Copies an optional flag into the configuration as section.key.
template <class T>
void put(Config& cfg, const std::string& section, const std::string& key,
         const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, std::string>)
    cfg.set(section + "." + key, *v);
  else
    cfg.set(section + "." + key, csv::format(static_cast<double>(*v)));
}

void report(const std::vector<fs::path>& written, const fs::path& dir) {
  for (const auto& p : written) std::cout << (dir / p).string() << "\n";
}

struct SimulateFlags {
  std::string mode = "error";
  std::optional<double> nu, tol, lo, hi, dt_init;
  std::optional<std::string> method, problem;
  bool bisect = false;
};

int simulate(const Config& cfg_in, const SimulateFlags& f, const fs::path& dir) {
  Config cfg = cfg_in;
  const std::string sec = "run";
  put(cfg, sec, "method", f.method);
  put(cfg, sec, "problem", f.problem);
  put(cfg, sec, "tol", f.tol);
  put(cfg, sec, "nu", f.nu);
  const auto method = cfg.get_string("method", sec, "BS3_3F");
  const auto tab = builtin(method);
  const auto problem = experiments::make_problem(experiments::ProblemSpec::from_config(cfg, sec));

  if (f.bisect) {
    const double lo = f.lo.value_or(cfg.get_double("lo", sec, 0.05));
    const double hi = f.hi.value_or(cfg.get_double("hi", sec, 10.0));
    const auto b = experiments::bisect_problem_cfl(problem, tab, lo, hi);
    csv::Table t;
    t.header = {"name", "nu_max", "nu_crash", "runs"};
    t.add_row({method, csv::format(b.nu_max), csv::format(b.nu_crash), std::to_string(b.runs)});
    csv::write_text(dir / "cfl_bisect.csv", t.to_string());
    std::cout << "nu_max " << csv::format(b.nu_max) << "\n";
    return kExitOk;
  }

  experiments::RunOutcome r;
  if (f.mode == "cfl") {
    const double nu = cfg.get_double("nu", sec, 0.0);
    if (!(nu > 0.0)) throw ConfigError("--mode cfl needs --nu > 0");
    r = experiments::run_cfl_control(problem, tab, nu);
  } else if (f.mode == "error") {
    auto c = ControllerConfig::for_method(method, cfg.get_double("tol", sec, 1e-5));
    c.beta = {cfg.get_double("beta1", sec, c.beta[0]), cfg.get_double("beta2", sec, c.beta[1]),
              cfg.get_double("beta3", sec, c.beta[2])};
    c.accept_safety = cfg.get_double("accept_safety", sec, c.accept_safety);
    c.w_min = cfg.get_double("w_min", sec, c.w_min);
    if (const auto rc = cfg.find("ref_choice", sec)) c.ref_choice = parse_reference_choice(*rc);
    try {
      c.validate();
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
    r = experiments::run_error_control(problem, tab, c, f.dt_init);
  } else {
    throw ConfigError("--mode must be error or cfl");
  }
  csv::write_text(dir / "trace.csv", r.trace.to_csv());
  csv::write_text(dir / "summary.csv",
                  "name,tol_or_nu,FE,A,R\n" + experiments::summary_line(r) + "\n");
  std::cout << experiments::summary_line(r) << "\n";
  if (r.crashed) {
    std::cerr << "rkctl: blow-up at t = " << r.t_final << ": " << r.message << "\n";
    return kExitBlowUp;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Runge-Kutta step size control experiments"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Common common;
  std::vector<std::pair<CLI::App*, std::string>> experiments_cmds;
  for (const char* name :
       {"plateau", "coldstart", "cfl-bisect", "convergence"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_common(cmd, common);
    experiments_cmds.emplace_back(cmd, name);
  }

  std::optional<std::string> sp_problem, sp_method;
  std::optional<double> sp_alpha;
  auto* spectra_cmd = app.add_subcommand("spectra", "operator spectra and stability embedding");
  add_common(spectra_cmd, common);
  spectra_cmd->add_option("--problem", sp_problem);
  spectra_cmd->add_option("--alpha", sp_alpha);
  spectra_cmd->add_option("--method", sp_method);

  std::optional<double> ex_h, ex_hv1, ex_hv2, ex_g, ex_sigma, ex_ag;
  bool ex_sweep = false;
  auto* exner_cmd = app.add_subcommand("exner-eigen", "SWE-Exner wave speeds");
  exner_cmd->set_help_flag("--help", "Print this help message and exit");
  add_common(exner_cmd, common);
  exner_cmd->add_option("--h", ex_h);
  exner_cmd->add_option("--hv1", ex_hv1);
  exner_cmd->add_option("--hv2", ex_hv2);
  exner_cmd->add_option("--g", ex_g);
  exner_cmd->add_option("--sigma", ex_sigma);
  exner_cmd->add_option("--ag", ex_ag);
  exner_cmd->add_flag("--sweep", ex_sweep);

  SimulateFlags sim;
  auto* run_cmd = app.add_subcommand("run", "single simulation under error or CFL control");
  add_common(run_cmd, common);
  run_cmd->add_option("--mode", sim.mode)->check(CLI::IsMember({"error", "cfl"}));
  run_cmd->add_option("--nu", sim.nu);
  run_cmd->add_option("--tol", sim.tol);
  run_cmd->add_option("--dt-init", sim.dt_init);
  run_cmd->add_option("--method", sim.method);
  run_cmd->add_option("--problem", sim.problem);
  run_cmd->add_flag("--bisect-cfl", sim.bisect);
  run_cmd->add_option("--lo", sim.lo);
  run_cmd->add_option("--hi", sim.hi);

  auto* all_cmd = app.add_subcommand("all", "run every experiment listed in the config");
  add_common(all_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Config cfg = load_config(common);
    const fs::path out = common.out_dir;
    if (run_cmd->parsed()) return simulate(cfg, sim, out);
    if (all_cmd->parsed()) {
      report(experiments::run_all(cfg, out), out);
      std::cout << (out / "manifest.txt").string() << "\n";
      return kExitOk;
    }
    if (spectra_cmd->parsed()) {
      put(cfg, "spectra", "problem", sp_problem);
      put(cfg, "spectra", "method", sp_method);
      put(cfg, "spectra", "alpha", sp_alpha);
      report(experiments::run_experiment("spectra", cfg, out), out);
      return kExitOk;
    }
    if (exner_cmd->parsed()) {
      const std::string s = "exner_eigen";
      put(cfg, s, "h", ex_h);
      put(cfg, s, "hv1", ex_hv1);
      put(cfg, s, "hv2", ex_hv2);
      put(cfg, s, "g", ex_g);
      put(cfg, s, "sigma", ex_sigma);
      put(cfg, s, "ag", ex_ag);
      if (ex_sweep) cfg.set(s + ".sweep", "true");
      report(experiments::run_experiment(s, cfg, out), out);
      return kExitOk;
    }
    for (const auto& [cmd, name] : experiments_cmds)
      if (cmd->parsed()) {
        report(experiments::run_experiment(name, cfg, out), out);
        return kExitOk;
      }
  } catch (const ConfigError& e) {
    std::cerr << "rkctl: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LookupError& e) {
    std::cerr << "rkctl: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BlowUpError& e) {
    std::cerr << "rkctl: blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "rkctl: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
