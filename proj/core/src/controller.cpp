#include "rkctl/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rkctl/errors.hpp"
#include "rkctl/tableau.hpp"

namespace rkctl {

ReferenceChoice parse_reference_choice(std::string_view text) {
  if (text == "previous_state") return ReferenceChoice::previous_state;
  if (text == "embedded_solution") return ReferenceChoice::embedded_solution;
  throw LookupError("unknown ref_choice '" + std::string(text) +
                    "' (previous_state | embedded_solution)");
}

std::string_view to_string(ReferenceChoice choice) noexcept {
  return choice == ReferenceChoice::previous_state ? "previous_state"
                                                   : "embedded_solution";
}

ControllerConfig ControllerConfig::for_method(std::string_view method, double tol) {
  const auto& info = method_info(method);
  ControllerConfig cfg;
  cfg.beta = info.beta;
  cfg.k = std::min(info.order_q, info.order_q_hat) + 1;
  cfg.tol_abs = tol;
  cfg.tol_rel = tol;
  return cfg;
}

void ControllerConfig::validate() const {
  if (k < 1) throw ContractViolation("controller: k must be >= 1");
  if (!(tol_abs > 0.0)) throw ContractViolation("controller: tol_abs must be > 0");
  if (!(tol_rel >= 0.0)) throw ContractViolation("controller: tol_rel must be >= 0");
  if (!(accept_safety > 0.0 && accept_safety < 1.0))
    throw ContractViolation("controller: accept_safety must lie in (0,1)");
  if (!(w_min > 0.0)) throw ContractViolation("controller: w_min must be > 0");
  for (double b : beta)
    if (!std::isfinite(b)) throw ContractViolation("controller: beta must be finite");
}

double error_weight_norm(std::span<const double> u_new, std::span<const double> u_hat,
                         std::span<const double> u_ref, const ControllerConfig& cfg) {
  if (u_new.empty()) throw ContractViolation("error_weight_norm: empty state");
  if (u_hat.size() != u_new.size() || u_ref.size() != u_new.size())
    throw ContractViolation("error_weight_norm: state lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < u_new.size(); ++i) {
    const double scale =
        cfg.tol_abs + cfg.tol_rel * std::max(std::abs(u_new[i]), std::abs(u_ref[i]));
    const double e = (u_new[i] - u_hat[i]) / scale;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(u_new.size()));
}

double limiter(double a) { return 1.0 + std::atan(a - 1.0); }

ControllerDecision propose(const ControllerState& state, double w_new,
                           const ControllerConfig& cfg) {
  const double w = std::max(w_new, cfg.w_min);
  const double eps_np1 = 1.0 / w;
  const double k = static_cast<double>(cfg.k);
  const double raw = std::pow(eps_np1, cfg.beta[0] / k) *
                     std::pow(state.eps_n, cfg.beta[1] / k) *
                     std::pow(state.eps_nm1, cfg.beta[2] / k);
  const double factor = limiter(raw);

  ControllerDecision d{};
  d.dt_factor = factor;
  d.accept = factor >= cfg.accept_safety;
  d.dt_next = factor * state.dt;
  d.new_state.eps_nm1 = state.eps_n;
  d.new_state.eps_n = eps_np1;
  d.new_state.dt = d.dt_next;
  return d;
}

InitialStep initial_dt(const RhsFunction& f, std::span<const double> u0, double t0,
                       int q, const ControllerConfig& cfg) {
  const auto m = u0.size();
  if (m == 0) throw ContractViolation("initial_dt: empty state");
  std::vector<double> scale(m);
  for (std::size_t i = 0; i < m; ++i) scale[i] = cfg.tol_abs + cfg.tol_rel * std::abs(u0[i]);
  auto norm = [&](auto&& value_at) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = value_at(i) / scale[i];
      sum += v * v;
    }
    return std::sqrt(sum / static_cast<double>(m));
  };
  auto require_finite = [](const std::vector<double>& v, const char* what) {
    for (double x : v)
      if (!std::isfinite(x))
        throw InitializationError(std::string("initial_dt: non-finite ") + what);
  };

  std::vector<double> f0(m), f1(m), u1(m);
  f(t0, u0, f0);
  require_finite(f0, "f(t0, u0)");

  const double d0 = norm([&](std::size_t i) { return u0[i]; });
  const double d1 = norm([&](std::size_t i) { return f0[i]; });
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;

  for (std::size_t i = 0; i < m; ++i) u1[i] = u0[i] + h0 * f0[i];
  f(t0 + h0, u1, f1);
  require_finite(f1, "f(t0 + h0, u1)");
  const double d2 = norm([&](std::size_t i) { return f1[i] - f0[i]; }) / h0;

  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dmax, 1.0 / (q + 1));
  return {std::min(100.0 * h0, h1), 2};
}

}  // namespace rkctl
