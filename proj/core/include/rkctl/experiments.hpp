#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rkctl/cfl.hpp"
#include "rkctl/config.hpp"
#include "rkctl/controller.hpp"
#include "rkctl/integrator.hpp"
#include "rkctl/spectra.hpp"
#include "rkctl/tableau.hpp"

namespace rkctl::experiments {

/// Semidiscretization setup. Unset fields take per-problem defaults.
struct ProblemSpec {
  /// advection1d, advection2d, advection2d_curved, blended_advection, euler1d
  std::string problem = "advection2d";
  int elements = 8;
  int degree = 3;
  double alpha = 0.0;
  /// blended_advection only: 1 or 2 space dimensions.
  int dimension = 2;
  std::vector<double> velocity;  // default (1,1)/sqrt(2) in 2D, 1 in 1D
  double warp = 1.0;             // advection2d_curved amplitude
  /// Advection domain [-L/2, L/2]^d.
  double domain_length = 6.283185307179586;
  double t_end = 10.0;

  // Advection initial data: offset + amplitude * sin(k x) [* sin(k y)] with
  // k = 2 pi / L.
  double offset = 1.0;
  double amplitude = 1e-6;
  /// Crash when max|u| exceeds this factor times max|u0|; 0 disables.
  double blowup_factor = 10.0;

  // 1D Euler.
  double gamma = 1.4;
  /// density_wave, smoothed_jump or free_stream
  std::string initial = "density_wave";
  double domain_left = 0.0;
  double domain_right = 1.0;
  std::array<double, 3> left_state{1.0, 0.0, 1.0};   // rho, v, p
  std::array<double, 3> right_state{0.125, 0.0, 0.1};
  double jump_position = 0.5;
  double jump_width = 0.01;

  /// Reads keys of `section` (falling back to unqualified keys).
  static ProblemSpec from_config(const Config& cfg, std::string_view section);
};

struct Problem {
  std::string name;
  RhsFunction rhs;
  /// Set for the linear advection problems.
  spectra::LinearOperator linear;
  std::vector<double> u0;
  MeshMetrics metrics;
  WaveSpeedFunction wavespeed;
  MeshLimitFunction mesh_limit;
  double t_end = 1.0;
  double blowup_limit = 0.0;  // absolute max|u| bound, 0 = off

  [[nodiscard]] std::size_t size() const noexcept { return u0.size(); }
};

/// Throws ConfigError for an unknown problem or initial condition.
[[nodiscard]] Problem make_problem(const ProblemSpec& spec);

struct RunOutcome {
  std::string method;
  std::string control;  // "tol" or "nu"
  double value = 0.0;
  StepStatistics stats;
  bool crashed = false;
  std::string message;
  double t_final = 0.0;
  StepTrace trace;
  std::vector<double> u_final;
};

[[nodiscard]] RunOutcome run_error_control(const Problem& problem, const ButcherTableau& tab,
                                           const ControllerConfig& cfg,
                                           std::optional<double> dt_init = {});
[[nodiscard]] RunOutcome run_cfl_control(const Problem& problem, const ButcherTableau& tab,
                                         double nu);

/// Bisection of the largest CFL number whose CFL-controlled run survives.
[[nodiscard]] BisectionResult bisect_problem_cfl(const Problem& problem,
                                                 const ButcherTableau& tab, double lo,
                                                 double hi);

/// One CSV line in the table schema name,tol_or_nu,FE,A,R.
[[nodiscard]] std::string summary_line(const RunOutcome& run);

struct PlateauRow {
  double tol;
  StepStatistics stats;
  bool crashed;
  double mean_effective_cfl;  // over the second half of accepted steps
};

struct PlateauResult {
  std::string method;
  std::vector<PlateauRow> rows;
  BisectionResult bisection{};
  StepStatistics baseline;  // CFL control at the bisected nu_max
};

/// Tolerance sweep under error control plus the CFL baseline.
[[nodiscard]] PlateauResult run_plateau(const Problem& problem, const ButcherTableau& tab,
                                        const std::vector<double>& tols, double nu_lo,
                                        double nu_hi);

struct ColdstartResult {
  RunOutcome error_run;
  double min_dt_first50 = 0.0;
  double median_dt_final_quartile = 0.0;
  double asymptotic_cfl = 0.0;  // median effective CFL of the final quartile
  RunOutcome cfl_run;           // CFL control at asymptotic_cfl
  /// Largest surviving CFL number at or below asymptotic_cfl (bisected when
  /// the run at asymptotic_cfl crashes).
  double nu_survive = 0.0;

  [[nodiscard]] double transient_ratio() const {
    return median_dt_final_quartile / min_dt_first50;
  }
};

[[nodiscard]] ColdstartResult run_coldstart(const Problem& problem, const ButcherTableau& tab,
                                            const ControllerConfig& cfg, bool bisect_survival);

struct SpectraResult {
  spectra::SpectrumReport dg;
  spectra::SpectrumReport sc;
  std::vector<spectra::Complex> sc_outside;  // SC eigenvalues outside at sigma*_DG

  [[nodiscard]] double ratio() const { return dg.sigma_star / sc.sigma_star; }
};

/// Spectra of the pure DG operator (alpha = 0) and of the blended one with
/// spec.alpha, both from `spec`.
[[nodiscard]] SpectraResult run_spectra(const ProblemSpec& spec, const ButcherTableau& tab,
                                        std::uint64_t seed = 7);

struct ConvergenceRow {
  std::string method;
  std::string solution;  // main or embedded
  std::int64_t steps;
  double error;
  double order;  // NaN on the coarsest level
};

/// Fixed-step refinement on u' = -u^2, u(0) = 1 up to t_end.
[[nodiscard]] std::vector<ConvergenceRow> run_convergence(const ButcherTableau& tab,
                                                          int levels = 6,
                                                          std::int64_t coarse_steps = 16,
                                                          double t_end = 2.0);

/// Problem setups of the plateau, spectra and coldstart experiments: the keys
/// of their config section with the experiment-specific defaults applied.
[[nodiscard]] ProblemSpec plateau_problem(const Config& cfg);
[[nodiscard]] ProblemSpec spectra_problem(const Config& cfg);
[[nodiscard]] ProblemSpec coldstart_problem(const Config& cfg);

/// Executes one experiment described by `cfg` and writes its outputs below
/// `out_dir`. Returns the written paths, relative to out_dir.
/// Experiments: plateau, spectra, coldstart, exner_eigen, cfl_bisect,
/// convergence.
[[nodiscard]] std::vector<std::filesystem::path> run_experiment(const std::string& kind,
                                                                const Config& cfg,
                                                                const std::filesystem::path& out_dir);

/// Runs every experiment listed under `experiments` and writes manifest.txt.
[[nodiscard]] std::vector<std::filesystem::path> run_all(const Config& cfg,
                                                         const std::filesystem::path& out_dir);

/// Canonical spelling of an experiment name ("exner-eigen" -> "exner_eigen").
/// Throws ConfigError for unknown names.
[[nodiscard]] std::string normalize_experiment(std::string_view name);

}  // namespace rkctl::experiments
