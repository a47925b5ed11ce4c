#include "rkctl/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "rkctl/errors.hpp"

namespace rkctl {

std::int64_t expected_function_evaluations(int stages, bool fsal, ControlKind kind,
                                           std::int64_t accepted, std::int64_t rejected,
                                           bool initial_dt_estimated) {
  if (kind == ControlKind::cfl_based) return stages * accepted + (fsal ? 1 : 0);
  return stages * (accepted + rejected) + (fsal ? 1 : 0) + (initial_dt_estimated ? 2 : 0);
}

std::vector<StepRecord> StepTrace::accepted() const {
  std::vector<StepRecord> out;
  for (const auto& r : records)
    if (r.accepted) out.push_back(r);
  return out;
}

std::string StepTrace::to_csv() const {
  std::string out = "step,t,dt,accepted,w,dt_factor,effective_cfl\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%lld,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(r.step), r.t, r.dt, r.accepted ? 1 : 0, r.w,
                  r.dt_factor, r.effective_cfl);
    out += line;
  }
  return out;
}

double effective_cfl(double dt, double mesh_limit) {
  if (!(mesh_limit > 0.0)) throw ContractViolation("effective_cfl: mesh limit must be > 0");
  return dt / mesh_limit;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Reusable stage storage for repeated steps of one tableau.
class Stepper {
 public:
  Stepper(const ButcherTableau& tab, const RhsFunction& f, std::size_t m)
      : tab_(tab), f_(f), k_(static_cast<std::size_t>(tab.stages()), std::vector<double>(m)),
        y_(m), u_next_(m), u_hat_(m), k_last_(tab.fsal() ? m : 0) {}

  // Returns the number of right-hand side evaluations.
  int step(double t, std::span<const double> u, double dt, const std::vector<double>* fsal_cache,
           bool embedded) {
    const int s = tab_.stages();
    const auto m = u.size();
    int evals = 0;
    auto eval = [&](double time, std::span<const double> state, std::vector<double>& out,
                    int stage) {
      try {
        f_(time, state, out);
      } catch (const SolutionError& e) {
        throw BlowUpError(std::string("invalid state in stage ") + std::to_string(stage) +
                              ": " + e.what(),
                          time, stage, std::vector<double>(u.begin(), u.end()));
      }
      ++evals;
      if (!all_finite(out))
        throw BlowUpError("non-finite stage derivative in stage " + std::to_string(stage),
                          time, stage, std::vector<double>(u.begin(), u.end()));
    };

    if (fsal_cache) {
      k_[0] = *fsal_cache;
    } else {
      eval(t, u, k_[0], 0);
    }
    const auto& c = tab_.c();
    for (int i = 1; i < s; ++i) {
      for (std::size_t n = 0; n < m; ++n) y_[n] = u[n];
      for (int j = 0; j < i; ++j) {
        const double aij = dt * tab_.a(i, j);
        if (aij == 0.0) continue;
        const auto& kj = k_[static_cast<std::size_t>(j)];
        for (std::size_t n = 0; n < m; ++n) y_[n] += aij * kj[n];
      }
      eval(t + c[static_cast<std::size_t>(i)] * dt, y_, k_[static_cast<std::size_t>(i)], i);
    }

    const auto& b = tab_.b();
    for (std::size_t n = 0; n < m; ++n) u_next_[n] = u[n];
    for (int i = 0; i < s; ++i) {
      const double w = dt * b[static_cast<std::size_t>(i)];
      if (w == 0.0) continue;
      const auto& ki = k_[static_cast<std::size_t>(i)];
      for (std::size_t n = 0; n < m; ++n) u_next_[n] += w * ki[n];
    }
    if (!all_finite(u_next_))
      throw BlowUpError("non-finite solution", t + dt, s,
                        std::vector<double>(u.begin(), u.end()));

    if (tab_.fsal()) eval(t + dt, u_next_, k_last_, s);

    if (embedded) {
      const auto& bh = tab_.b_hat();
      for (std::size_t n = 0; n < m; ++n) u_hat_[n] = u[n];
      for (int i = 0; i < s; ++i) {
        const double w = dt * bh[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        const auto& ki = k_[static_cast<std::size_t>(i)];
        for (std::size_t n = 0; n < m; ++n) u_hat_[n] += w * ki[n];
      }
      if (tab_.fsal()) {
        const double w = dt * bh[static_cast<std::size_t>(s)];
        for (std::size_t n = 0; n < m; ++n) u_hat_[n] += w * k_last_[n];
      }
    }
    return evals;
  }

  const std::vector<double>& u_next() const { return u_next_; }
  const std::vector<double>& u_hat() const { return u_hat_; }
  const std::vector<double>& k_first() const { return k_[0]; }
  const std::vector<double>& k_last() const { return k_last_; }

 private:
  const ButcherTableau& tab_;
  const RhsFunction& f_;
  std::vector<std::vector<double>> k_;
  std::vector<double> y_, u_next_, u_hat_, k_last_;
};

double snap_to_end(double t_new, double t_end) {
  const double ulp = std::nextafter(std::abs(t_end), std::numeric_limits<double>::infinity()) -
                     std::abs(t_end);
  return std::abs(t_new - t_end) <= 100.0 * ulp ? t_end : t_new;
}

}  // namespace

RkStepResult rk_step(const ButcherTableau& tab, const RhsFunction& f, double t,
                     std::span<const double> u, double dt,
                     std::optional<std::span<const double>> fsal_cache, bool compute_embedded) {
  if (!(dt > 0.0)) throw ContractViolation("rk_step: dt must be > 0");
  Stepper stepper(tab, f, u.size());
  std::vector<double> cache;
  if (fsal_cache) {
    if (fsal_cache->size() != u.size())
      throw ContractViolation("rk_step: FSAL cache length differs from state");
    cache.assign(fsal_cache->begin(), fsal_cache->end());
  }
  RkStepResult r;
  r.f_evals = stepper.step(t, u, dt, fsal_cache ? &cache : nullptr, compute_embedded);
  r.u_next = stepper.u_next();
  if (compute_embedded) r.u_hat = stepper.u_hat();
  r.k_first = stepper.k_first();
  if (tab.fsal()) r.k_last = stepper.k_last();
  return r;
}

IntegrationResult integrate(const ButcherTableau& tab, const RhsFunction& f,
                            std::span<const double> u0, double t0, double t_end,
                            const ControlMode& mode, const IntegrateOptions& options) {
  if (!(t_end > t0)) throw ContractViolation("integrate: t_end must exceed t0");
  if (u0.empty()) throw ContractViolation("integrate: empty initial state");

  const auto m = u0.size();
  IntegrationResult result;
  auto& stats = result.stats;

  std::int64_t counted = 0;
  const RhsFunction counted_f = [&](double t, std::span<const double> u, std::span<double> du) {
    ++counted;
    f(t, u, du);
  };

  Stepper stepper(tab, counted_f, m);
  std::vector<double> u(u0.begin(), u0.end());
  std::vector<double> cache;
  bool cache_valid = false;
  double t = t0;
  const double dt_min = 1e-14 * (t_end - t0);

  const auto* error_mode = std::get_if<ErrorControl>(&mode);
  const auto* cfl_mode = std::get_if<CflControl>(&mode);

  ControllerState ctrl;
  if (error_mode) {
    error_mode->config.validate();
    if (options.dt_init) {
      ctrl.dt = *options.dt_init;
    } else {
      ctrl.dt = initial_dt(counted_f, u, t0, tab.order_q(), error_mode->config).dt0;
    }
  } else {
    if (!(cfl_mode->nu > 0.0)) throw ContractViolation("integrate: CFL number must be > 0");
    if (!cfl_mode->mesh_limit) throw ContractViolation("integrate: CFL control needs a mesh limit");
    ctrl.dt = options.dt_init ? *options.dt_init : cfl_mode->nu * cfl_mode->mesh_limit(u);
  }
  if (!(ctrl.dt > 0.0) || !std::isfinite(ctrl.dt))
    throw InitializationError("integrate: starting step size is not positive");

  std::int64_t attempt = 0;
  try {
    while (t < t_end) {
      if (attempt >= options.max_attempts)
        throw StagnationError("integrate: step attempt limit reached", t, ctrl.dt);
      if (ctrl.dt < dt_min)
        throw StagnationError("integrate: step size underflow", t, ctrl.dt);

      double dt = ctrl.dt;
      if (t + dt > t_end) dt = t_end - t;

      const double limit_now = options.mesh_limit ? options.mesh_limit(u) : kNaN;
      stepper.step(t, u, dt, (tab.fsal() && cache_valid) ? &cache : nullptr, error_mode != nullptr);

      StepRecord rec{attempt, t, dt, true, kNaN, kNaN,
                     options.mesh_limit ? dt / limit_now : kNaN};
      bool accept = true;
      if (error_mode) {
        const auto& cfg = error_mode->config;
        const auto& ref = cfg.ref_choice == ReferenceChoice::previous_state
                              ? std::span<const double>(u)
                              : std::span<const double>(stepper.u_hat());
        const double w = error_weight_norm(stepper.u_next(), stepper.u_hat(), ref, cfg);
        if (!std::isfinite(w))
          throw BlowUpError("non-finite error estimate", t, -1, u);
        ControllerState current = ctrl;
        current.dt = dt;
        const auto decision = propose(current, w, cfg);
        accept = decision.accept;
        ctrl = decision.new_state;
        rec.w = w;
        rec.dt_factor = decision.dt_factor;
        rec.accepted = accept;
      }

      if (accept) {
        const double t_new = snap_to_end(t + dt, t_end);
        u = stepper.u_next();
        if (tab.fsal()) {
          cache = stepper.k_last();
          cache_valid = true;
        }
        t = t_new;
        ++stats.n_accepted;
        rec.t = t;
        if (options.record_trace) result.trace.records.push_back(rec);
        for (const auto& cb : options.callbacks) cb(StepInfo{attempt, t, dt, u});
        if (cfl_mode) ctrl.dt = cfl_mode->nu * cfl_mode->mesh_limit(u);
      } else {
        ++stats.n_rejected;
        if (tab.fsal() && !cache_valid) {
          cache = stepper.k_first();
          cache_valid = true;
        }
        if (options.record_trace) result.trace.records.push_back(rec);
      }
      ++attempt;
    }
  } catch (...) {
    if (options.partial) {
      stats.n_fe = counted;
      result.u_final = std::move(u);
      result.t_final = t;
      *options.partial = std::move(result);
    }
    throw;
  }

  stats.n_fe = counted;
  result.u_final = std::move(u);
  result.t_final = t;
  return result;
}

std::vector<double> integrate_fixed(const ButcherTableau& tab, const RhsFunction& f,
                                    std::span<const double> u0, double t0, double t_end,
                                    std::int64_t n_steps, PropagatedSolution which) {
  if (n_steps < 1) throw ContractViolation("integrate_fixed: need at least one step");
  const double dt = (t_end - t0) / static_cast<double>(n_steps);
  Stepper stepper(tab, f, u0.size());
  std::vector<double> u(u0.begin(), u0.end());
  const bool embedded = which == PropagatedSolution::embedded;
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const double t = t0 + static_cast<double>(n) * dt;
    stepper.step(t, u, dt, nullptr, embedded);
    u = embedded ? stepper.u_hat() : stepper.u_next();
  }
  return u;
}

}  // namespace rkctl
