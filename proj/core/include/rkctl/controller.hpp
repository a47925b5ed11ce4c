#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>

namespace rkctl {

class ButcherTableau;

/// Which state enters max(|u_new|, |u_ref|) in the error weights.
enum class ReferenceChoice {
  previous_state,     // u^n
  embedded_solution,  // \hat u^{n+1}
};

[[nodiscard]] ReferenceChoice parse_reference_choice(std::string_view text);
[[nodiscard]] std::string_view to_string(ReferenceChoice choice) noexcept;

struct ControllerConfig {
  std::array<double, 3> beta{0.60, -0.20, 0.00};
  int k = 3;
  double tol_abs = 1e-4;
  double tol_rel = 1e-4;
  double accept_safety = 0.81;
  double w_min = 2.220446049250313e-16;
  ReferenceChoice ref_choice = ReferenceChoice::previous_state;

  /// Equal absolute and relative tolerance, k = q and the method's tuned
  /// beta from method_info().
  static ControllerConfig for_method(std::string_view method, double tol);

  /// Throws ContractViolation when an invariant does not hold.
  void validate() const;
};

struct ControllerState {
  double eps_n = 1.0;
  double eps_nm1 = 1.0;
  double dt = 0.0;
};

struct ControllerDecision {
  double dt_factor;
  bool accept;
  double dt_next;
  ControllerState new_state;
};

/// Weighted RMS norm of u_new - u_hat with weights
/// tol_abs + tol_rel * max(|u_new_i|, |u_ref_i|).
[[nodiscard]] double error_weight_norm(std::span<const double> u_new,
                                       std::span<const double> u_hat,
                                       std::span<const double> u_ref,
                                       const ControllerConfig& cfg);

/// Step size limiter kappa(a) = 1 + atan(a - 1).
[[nodiscard]] double limiter(double a);

/// PID step size proposal. The controller memory advances on accepted and
/// rejected steps alike; on rejection the proposed step becomes the retry.
[[nodiscard]] ControllerDecision propose(const ControllerState& state, double w_new,
                                         const ControllerConfig& cfg);

using RhsFunction =
    std::function<void(double t, std::span<const double> u, std::span<double> du)>;

struct InitialStep {
  double dt0;
  int f_evals;
};

/// Starting step size estimate (Hairer, Norsett & Wanner, Solving ODEs I,
/// p. 169) with the error weights of `cfg` frozen at u0. Costs exactly two
/// right-hand side evaluations.
[[nodiscard]] InitialStep initial_dt(const RhsFunction& f, std::span<const double> u0,
                                     double t0, int q, const ControllerConfig& cfg);

}  // namespace rkctl
