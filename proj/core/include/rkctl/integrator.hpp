#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rkctl/controller.hpp"
#include "rkctl/tableau.hpp"

namespace rkctl {

/// Exact evaluation counts of one integration run.
struct StepStatistics {
  std::int64_t n_fe = 0;
  std::int64_t n_accepted = 0;
  std::int64_t n_rejected = 0;
};

enum class ControlKind { error_based, cfl_based };

/// Evaluation count implied by the counting identities of the integrator:
///   error control, FSAL:      s (A + R) + 1 + 2
///   error control, non-FSAL:  s (A + R) + 2
///   CFL control, FSAL:        s A + 1
///   CFL control, non-FSAL:    s A
/// `initial_dt_estimated` drops the "+2" when the starting step was given.
[[nodiscard]] std::int64_t expected_function_evaluations(
    int stages, bool fsal, ControlKind kind, std::int64_t accepted,
    std::int64_t rejected, bool initial_dt_estimated = true);

struct StepRecord {
  std::int64_t step;  // attempt index, counting rejected attempts
  double t;           // new time for accepted steps, start time otherwise
  double dt;
  bool accepted;
  double w;  // NaN under CFL control
  double dt_factor;
  double effective_cfl;  // NaN without a mesh limit
};

struct StepTrace {
  std::vector<StepRecord> records;

  [[nodiscard]] std::vector<StepRecord> accepted() const;
  /// CSV with header step,t,dt,accepted,w,dt_factor,effective_cfl.
  [[nodiscard]] std::string to_csv() const;
};

/// min_i dx_i / lambda_max(u_i) for the current state.
using MeshLimitFunction = std::function<double(std::span<const double> u)>;

struct ErrorControl {
  ControllerConfig config;
};

struct CflControl {
  double nu;
  MeshLimitFunction mesh_limit;
};

using ControlMode = std::variant<ErrorControl, CflControl>;

struct StepInfo {
  std::int64_t step;
  double t;
  double dt;
  std::span<const double> u;
};

/// Invoked after every accepted step, never after a rejected one.
using StepCallback = std::function<void(const StepInfo&)>;

struct IntegrationResult {
  std::vector<double> u_final;
  double t_final = 0.0;
  StepTrace trace;
  StepStatistics stats;
};

struct IntegrateOptions {
  /// Overrides the automatic starting step under error control.
  std::optional<double> dt_init;
  std::vector<StepCallback> callbacks;
  /// When set, every trace record carries dt / mesh_limit(u^n).
  MeshLimitFunction mesh_limit;
  bool record_trace = true;
  std::int64_t max_attempts = 50'000'000;
  /// When set, receives the counts, trace and last accepted state if the run
  /// throws after the first step attempt.
  IntegrationResult* partial = nullptr;
};

struct RkStepResult {
  std::vector<double> u_next;
  std::vector<double> u_hat;   // empty when the embedded solution was skipped
  std::vector<double> k_first; // f(t, u)
  std::vector<double> k_last;  // f(t + dt, u_next) for FSAL pairs, else empty
  int f_evals = 0;
};

/// One step of the pair. With `fsal_cache` = f(t, u) the first stage is not
/// re-evaluated. FSAL pairs always evaluate f(t + dt, u_next).
/// Non-finite stage derivatives raise BlowUpError(t, stage).
[[nodiscard]] RkStepResult rk_step(const ButcherTableau& tab, const RhsFunction& f,
                                   double t, std::span<const double> u, double dt,
                                   std::optional<std::span<const double>> fsal_cache = {},
                                   bool compute_embedded = true);

/// Adaptive loop for t in (t0, t_end] with either PID error control or CFL
/// control. Throws BlowUpError or StagnationError.
[[nodiscard]] IntegrationResult integrate(const ButcherTableau& tab, const RhsFunction& f,
                                          std::span<const double> u0, double t0,
                                          double t_end, const ControlMode& mode,
                                          const IntegrateOptions& options = {});

enum class PropagatedSolution { main, embedded };

/// n_steps equal steps, propagating either the main or the embedded solution.
[[nodiscard]] std::vector<double> integrate_fixed(const ButcherTableau& tab,
                                                  const RhsFunction& f,
                                                  std::span<const double> u0, double t0,
                                                  double t_end, std::int64_t n_steps,
                                                  PropagatedSolution which =
                                                      PropagatedSolution::main);

/// dt / mesh_limit.
[[nodiscard]] double effective_cfl(double dt, double mesh_limit);

}  // namespace rkctl
