#include "rkctl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "rkctl/csv.hpp"
#include "rkctl/dgsem.hpp"
#include "rkctl/errors.hpp"
#include "rkctl/exner.hpp"
#include "rkctl/version.hpp"

namespace rkctl::experiments {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::array<double, 3> triple(const Config& cfg, std::string_view key, std::string_view section,
                             std::array<double, 3> fallback) {
  const auto v = cfg.get_list(key, section, {fallback[0], fallback[1], fallback[2]});
  if (v.size() != 3) throw ConfigError(std::string(key) + " needs three values (rho v p)");
  return {v[0], v[1], v[2]};
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class Op>
void attach_linear(Problem& p, std::shared_ptr<const Op> op) {
  p.rhs = [op](double, std::span<const double> u, std::span<double> du) { op->rhs(u, du); };
  p.linear = [op](std::span<const double> u, std::span<double> du) { op->rhs(u, du); };
}

void finish_advection(Problem& p, const ProblemSpec& s, std::vector<double> a) {
  p.wavespeed = constant_velocity(std::move(a));
  const double limit = mesh_limit(p.u0, p.metrics, p.wavespeed);
  p.mesh_limit = [limit](std::span<const double>) { return limit; };
  p.t_end = s.t_end;
  p.blowup_limit = s.blowup_factor > 0.0 ? s.blowup_factor * max_abs(p.u0) : 0.0;
}

Problem make_advection_1d(const ProblemSpec& s) {
  const double a = s.velocity.empty() ? 1.0 : s.velocity[0];
  const double half = 0.5 * s.domain_length, k = 2.0 * kPi / s.domain_length;
  dgsem::Mesh1D mesh(s.elements, s.degree, -half, half);
  auto op = std::make_shared<const dgsem::Advection1D>(mesh, a, s.alpha);
  Problem p;
  p.name = s.problem;
  attach_linear(p, op);
  p.u0.resize(op->size());
  for (std::size_t i = 0; i < p.u0.size(); ++i)
    p.u0[i] = s.offset + s.amplitude * std::sin(k * op->mesh().x[i]);
  p.metrics = op->mesh().metrics();
  finish_advection(p, s, {a});
  return p;
}

Problem make_advection_2d(const ProblemSpec& s, bool curved) {
  std::array<double, 2> a{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  if (!s.velocity.empty()) {
    if (s.velocity.size() != 2) throw ConfigError("velocity needs two components in 2D");
    a = {s.velocity[0], s.velocity[1]};
  }
  const double half = 0.5 * s.domain_length, k = 2.0 * kPi / s.domain_length;
  dgsem::WarpParameters warp;
  warp.length_x = warp.length_y = s.domain_length;
  warp.amplitude = s.warp;
  auto mesh = curved ? dgsem::Mesh2D::warped(s.elements, s.degree, warp)
                     : dgsem::Mesh2D::cartesian(s.elements, s.degree, -half, half);
  auto op = std::make_shared<const dgsem::Advection2D>(std::move(mesh), a, s.alpha);
  Problem p;
  p.name = s.problem;
  attach_linear(p, op);
  const auto& m = op->mesh();
  p.u0.resize(op->size());
  for (std::size_t i = 0; i < p.u0.size(); ++i)
    p.u0[i] = s.offset + s.amplitude * std::sin(k * m.x[i]) * std::sin(k * m.y[i]);
  p.metrics = m.metrics();
  p.metrics.validate();
  finish_advection(p, s, {a[0], a[1]});
  return p;
}

Problem make_euler_1d(const ProblemSpec& s) {
  dgsem::Mesh1D mesh(s.elements, s.degree, s.domain_left, s.domain_right);
  const double g = s.gamma;
  const auto& L = s.left_state;
  const auto& R = s.right_state;
  auto boundary = dgsem::EulerBoundary::periodic;
  dgsem::EulerState left_bc{}, right_bc{};
  std::vector<std::array<double, 3>> prim(mesh.num_nodes());
  const double length = s.domain_right - s.domain_left;
  for (std::size_t k = 0; k < prim.size(); ++k) {
    const double x = mesh.x[k];
    if (s.initial == "density_wave") {
      prim[k] = {1.0 + 0.5 * std::sin(2.0 * kPi * (x - s.domain_left) / length), 1.0, 1.0};
    } else if (s.initial == "free_stream") {
      prim[k] = L;
    } else if (s.initial == "smoothed_jump") {
      const double w = 0.5 * (1.0 + std::tanh((x - s.jump_position) / s.jump_width));
      for (int v = 0; v < 3; ++v) prim[k][v] = L[v] + (R[v] - L[v]) * w;
    } else {
      throw ConfigError("unknown euler1d initial condition '" + s.initial + "'");
    }
  }
  if (s.initial == "smoothed_jump") {
    boundary = dgsem::EulerBoundary::dirichlet;
    left_bc = dgsem::euler_from_primitive(L[0], L[1], L[2], g);
    right_bc = dgsem::euler_from_primitive(R[0], R[1], R[2], g);
  }
  auto op = std::make_shared<const dgsem::Euler1D>(mesh, g, boundary, left_bc, right_bc);
  Problem p;
  p.name = s.problem;
  p.rhs = [op](double, std::span<const double> u, std::span<double> du) { op->rhs(u, du); };
  p.u0.resize(op->size());
  for (std::size_t k = 0; k < prim.size(); ++k) {
    const auto c = dgsem::euler_from_primitive(prim[k][0], prim[k][1], prim[k][2], g);
    p.u0[3 * k] = c.rho;
    p.u0[3 * k + 1] = c.mom;
    p.u0[3 * k + 2] = c.energy;
  }
  p.metrics = op->mesh().metrics();
  p.wavespeed = op->wavespeed();
  p.mesh_limit = [metrics = p.metrics, ws = p.wavespeed](std::span<const double> u) {
    return rkctl::mesh_limit(u, metrics, ws);
  };
  p.t_end = s.t_end;
  return p;
}

RunOutcome run(const Problem& problem, const ButcherTableau& tab, const ControlMode& mode,
               std::optional<double> dt_init, bool record_trace) {
  RunOutcome out;
  out.method = tab.name();
  if (const auto* e = std::get_if<ErrorControl>(&mode)) {
    out.control = "tol";
    out.value = e->config.tol_rel > 0.0 ? e->config.tol_rel : e->config.tol_abs;
  } else {
    out.control = "nu";
    out.value = std::get<CflControl>(mode).nu;
  }
  IntegrateOptions opt;
  opt.dt_init = dt_init;
  opt.mesh_limit = problem.mesh_limit;
  opt.record_trace = record_trace;
  if (problem.blowup_limit > 0.0) {
    const double limit = problem.blowup_limit;
    opt.callbacks.push_back([limit](const StepInfo& info) {
      if (max_abs(info.u) > limit)
        throw BlowUpError("solution exceeded the growth bound", info.t, -1,
                          std::vector<double>(info.u.begin(), info.u.end()));
    });
  }
  IntegrationResult r;
  opt.partial = &r;
  try {
    r = integrate(tab, problem.rhs, problem.u0, 0.0, problem.t_end, mode, opt);
  } catch (const BlowUpError& e) {
    out.crashed = true;
    out.message = e.what();
  } catch (const StagnationError& e) {
    out.crashed = true;
    out.message = e.what();
  } catch (const SolutionError& e) {
    out.crashed = true;
    out.message = e.what();
  }
  // On a crash these describe the run up to the last accepted step.
  out.stats = r.stats;
  out.t_final = r.t_final;
  out.trace = std::move(r.trace);
  out.u_final = std::move(r.u_final);
  return out;
}

double mean_late_cfl(const StepTrace& trace) {
  const auto acc = trace.accepted();
  if (acc.empty()) return kNaN;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = acc.size() / 2; i < acc.size(); ++i) {
    // The clamped final step is shorter than the controller's choice.
    if (i + 1 == acc.size() && acc.size() > 1) continue;
    sum += acc[i].effective_cfl;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : acc.back().effective_cfl;
}

std::string join_path(const std::filesystem::path& p) { return p.generic_string(); }

}  // namespace

ProblemSpec ProblemSpec::from_config(const Config& cfg, std::string_view section) {
  ProblemSpec s;
  s.problem = cfg.get_string("problem", section, s.problem);
  s.elements = cfg.get_int("elements", section, s.elements);
  s.degree = cfg.get_int("degree", section, s.degree);
  s.alpha = cfg.get_double("alpha", section, s.alpha);
  s.dimension = cfg.get_int("dimension", section, s.dimension);
  s.velocity = cfg.get_list("velocity", section, {});
  s.warp = cfg.get_double("warp", section, s.warp);
  s.domain_length = cfg.get_double("domain_length", section, s.domain_length);
  s.t_end = cfg.get_double("t_end", section, s.t_end);
  s.offset = cfg.get_double("offset", section, s.offset);
  s.amplitude = cfg.get_double("amplitude", section, s.amplitude);
  s.blowup_factor = cfg.get_double("blowup_factor", section, s.blowup_factor);
  s.gamma = cfg.get_double("gamma", section, s.gamma);
  s.initial = cfg.get_string("initial", section, s.initial);
  s.domain_left = cfg.get_double("domain_left", section, s.domain_left);
  s.domain_right = cfg.get_double("domain_right", section, s.domain_right);
  s.left_state = triple(cfg, "left_state", section, s.left_state);
  s.right_state = triple(cfg, "right_state", section, s.right_state);
  s.jump_position = cfg.get_double("jump_position", section, s.jump_position);
  s.jump_width = cfg.get_double("jump_width", section, s.jump_width);
  return s;
}

Problem make_problem(const ProblemSpec& s) {
  if (s.elements < 1 || s.degree < 1) throw ConfigError("elements and degree must be >= 1");
  if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  if (!(s.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(s.domain_length > 0.0)) throw ConfigError("domain_length must be positive");
  if (s.problem == "advection1d") return make_advection_1d(s);
  if (s.problem == "advection2d") return make_advection_2d(s, false);
  if (s.problem == "advection2d_curved") return make_advection_2d(s, true);
  if (s.problem == "blended_advection") {
    if (s.dimension == 1) return make_advection_1d(s);
    if (s.dimension == 2) return make_advection_2d(s, false);
    throw ConfigError("blended_advection dimension must be 1 or 2");
  }
  if (s.problem == "euler1d") {
    if (!(s.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    return make_euler_1d(s);
  }
  throw ConfigError("unknown problem '" + s.problem + "'");
}

RunOutcome run_error_control(const Problem& problem, const ButcherTableau& tab,
                             const ControllerConfig& cfg, std::optional<double> dt_init) {
  return run(problem, tab, ErrorControl{cfg}, dt_init, true);
}

RunOutcome run_cfl_control(const Problem& problem, const ButcherTableau& tab, double nu) {
  return run(problem, tab, CflControl{nu, problem.mesh_limit}, std::nullopt, true);
}

BisectionResult bisect_problem_cfl(const Problem& problem, const ButcherTableau& tab, double lo,
                                   double hi) {
  return bisect_max_cfl_detailed(
      [&](double nu) {
        return !run(problem, tab, CflControl{nu, problem.mesh_limit}, std::nullopt, false)
                    .crashed;
      },
      lo, hi);
}

std::string summary_line(const RunOutcome& r) {
  return r.method + "," + csv::format(r.value) + "," + std::to_string(r.stats.n_fe) + "," +
         std::to_string(r.stats.n_accepted) + "," + std::to_string(r.stats.n_rejected);
}

PlateauResult run_plateau(const Problem& problem, const ButcherTableau& tab,
                          const std::vector<double>& tols, double nu_lo, double nu_hi) {
  if (tols.empty()) throw ConfigError("plateau: empty tolerance list");
  PlateauResult res;
  res.method = tab.name();
  for (double tol : tols) {
    const auto r = run_error_control(problem, tab, ControllerConfig::for_method(tab.name(), tol));
    res.rows.push_back({tol, r.stats, r.crashed, r.crashed ? kNaN : mean_late_cfl(r.trace)});
  }
  res.bisection = bisect_problem_cfl(problem, tab, nu_lo, nu_hi);
  res.baseline = run_cfl_control(problem, tab, res.bisection.nu_max).stats;
  return res;
}

ColdstartResult run_coldstart(const Problem& problem, const ButcherTableau& tab,
                              const ControllerConfig& cfg, bool bisect_survival) {
  ColdstartResult res;
  res.error_run = run_error_control(problem, tab, cfg);
  if (res.error_run.crashed) return res;
  const auto acc = res.error_run.trace.accepted();
  // The last step is clamped to the final time and does not reflect the controller.
  const std::size_t n = acc.size() > 1 ? acc.size() - 1 : acc.size();
  res.min_dt_first50 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min<std::size_t>(50, n); ++i)
    res.min_dt_first50 = std::min(res.min_dt_first50, acc[i].dt);
  std::vector<double> dts, cfls;
  for (std::size_t i = (3 * n) / 4; i < n; ++i) {
    dts.push_back(acc[i].dt);
    cfls.push_back(acc[i].effective_cfl);
  }
  res.median_dt_final_quartile = median(dts);
  res.asymptotic_cfl = median(cfls);
  res.cfl_run = run_cfl_control(problem, tab, res.asymptotic_cfl);
  res.nu_survive = res.asymptotic_cfl;
  if (res.cfl_run.crashed && bisect_survival) {
    const double lo = 0.01 * res.asymptotic_cfl;
    try {
      res.nu_survive = bisect_problem_cfl(problem, tab, lo, res.asymptotic_cfl).nu_max;
    } catch (const BracketError&) {
      res.nu_survive = 0.0;
    }
  }
  return res;
}

SpectraResult run_spectra(const ProblemSpec& spec, const ButcherTableau& tab, std::uint64_t seed) {
  ProblemSpec dg_spec = spec;
  dg_spec.alpha = 0.0;
  const auto dg = make_problem(dg_spec);
  const auto sc = make_problem(spec);
  if (!dg.linear || !sc.linear) throw ConfigError("spectra: problem is not linear");
  SpectraResult res;
  res.dg = spectra::spectrum_report(dg.linear, dg.size(), tab, seed);
  res.sc = spectra::spectrum_report(sc.linear, sc.size(), tab, seed);
  res.sc_outside = spectra::outside_region(res.sc.eigenvalues, tab, res.dg.sigma_star);
  return res;
}

std::vector<ConvergenceRow> run_convergence(const ButcherTableau& tab, int levels,
                                            std::int64_t coarse_steps, double t_end) {
  const RhsFunction f = [](double, std::span<const double> u, std::span<double> du) {
    du[0] = -u[0] * u[0];
  };
  const double exact = 1.0 / (1.0 + t_end);
  const std::vector<double> u0{1.0};
  std::vector<ConvergenceRow> rows;
  for (auto which : {PropagatedSolution::main, PropagatedSolution::embedded}) {
    double prev = kNaN;
    for (int l = 0; l < levels; ++l) {
      const std::int64_t n = coarse_steps << l;
      const auto u = integrate_fixed(tab, f, u0, 0.0, t_end, n, which);
      const double err = std::abs(u[0] - exact);
      rows.push_back({tab.name(), which == PropagatedSolution::main ? "main" : "embedded", n, err,
                      l == 0 ? kNaN : std::log2(prev / err)});
      prev = err;
    }
  }
  return rows;
}

ProblemSpec plateau_problem(const Config& cfg) {
  auto spec = ProblemSpec::from_config(cfg, "plateau");
  // Enough mesh-crossing times within t_end for the stability-limited regime.
  if (!cfg.has("domain_length", "plateau")) spec.domain_length = 0.5;
  return spec;
}

ProblemSpec spectra_problem(const Config& cfg) {
  auto spec = ProblemSpec::from_config(cfg, "spectra");
  if (!cfg.has("problem", "spectra")) spec.problem = "blended_advection";
  if (!cfg.has("alpha", "spectra")) spec.alpha = 0.5;
  return spec;
}

ProblemSpec coldstart_problem(const Config& cfg) {
  const std::string sec = "coldstart";
  auto spec = ProblemSpec::from_config(cfg, sec);
  if (!cfg.has("problem", sec)) spec.problem = "euler1d";
  if (!cfg.has("initial", sec)) spec.initial = "smoothed_jump";
  // Jump near the right end: the shock leaves early and the rarefaction head
  // has not reached the left boundary by t_end.
  if (!cfg.has("elements", sec)) spec.elements = 32;
  if (!cfg.has("jump_position", sec)) spec.jump_position = 0.8;
  if (!cfg.has("jump_width", sec)) spec.jump_width = 0.02;
  if (!cfg.has("t_end", sec)) spec.t_end = 0.6;
  return spec;
}

std::string normalize_experiment(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  static const char* known[] = {"plateau",     "spectra",    "coldstart",
                                "exner_eigen", "cfl_bisect", "convergence"};
  for (const char* k : known)
    if (s == k) return s;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

namespace {

using Paths = std::vector<std::filesystem::path>;

void emit(const std::filesystem::path& dir, const std::filesystem::path& name,
          std::string_view text, Paths& out) {
  csv::write_text(dir / name, text);
  out.push_back(name);
}

Paths experiment_plateau(const Config& cfg, const std::filesystem::path& dir) {
  const std::string sec = "plateau";
  const auto spec = plateau_problem(cfg);
  const auto tab = builtin(cfg.get_string("method", sec, "BS3_3F"));
  const auto tols = cfg.get_list("tols", sec, {1e-4, 1e-5, 1e-6, 1e-7});
  const auto problem = make_problem(spec);
  const auto res = run_plateau(problem, tab, tols, cfg.get_double("nu_lo", sec, 0.05),
                               cfg.get_double("nu_hi", sec, 10.0));

  csv::Table t;
  t.header = {"name", "tol_or_nu", "FE", "A", "R", "crashed", "mean_effective_cfl"};
  std::ostringstream md;
  md << "| method | tol / nu | #FE | #A | #R |\n|---|---|---|---|---|\n";
  for (const auto& r : res.rows) {
    t.add_row({res.method, csv::format(r.tol), std::to_string(r.stats.n_fe),
               std::to_string(r.stats.n_accepted), std::to_string(r.stats.n_rejected),
               r.crashed ? "1" : "0", csv::format(r.mean_effective_cfl)});
    md << "| " << res.method << " | " << r.tol << " | "
       << (r.crashed ? std::string("crash") : std::to_string(r.stats.n_fe)) << " | "
       << r.stats.n_accepted << " | " << r.stats.n_rejected << " |\n";
  }
  t.add_row({res.method + "_cfl", csv::format(res.bisection.nu_max),
             std::to_string(res.baseline.n_fe), std::to_string(res.baseline.n_accepted), "0", "0",
             csv::format(res.bisection.nu_max)});
  md << "| " << res.method << " (CFL) | " << res.bisection.nu_max << " | " << res.baseline.n_fe
     << " | " << res.baseline.n_accepted << " | 0 |\n";
  Paths out;
  emit(dir, "plateau.csv", t.to_string(), out);
  emit(dir, "plateau.md", md.str(), out);
  return out;
}

Paths experiment_spectra(const Config& cfg, const std::filesystem::path& dir) {
  const std::string sec = "spectra";
  const auto spec = spectra_problem(cfg);
  const auto tab = builtin(cfg.get_string("method", sec, "BS3_3F"));
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", sec, 7));
  const auto res = run_spectra(spec, tab, seed);

  csv::Table spectrum;
  spectrum.header = {"re", "im", "alpha"};
  for (const auto& l : res.dg.eigenvalues) spectrum.add_numbers({l.real(), l.imag(), 0.0});
  for (const auto& l : res.sc.eigenvalues) spectrum.add_numbers({l.real(), l.imag(), spec.alpha});

  const double s_eff = res.dg.effective_stages;
  csv::Table region;
  region.header = {"re", "im", "re_per_stage", "im_per_stage"};
  for (const auto& p : spectra::stability_boundary(tab))
    region.add_numbers({p.re, p.im, p.re / s_eff, p.im / s_eff});

  std::ostringstream rep;
  rep.precision(17);
  rep << "method " << tab.name() << "\n"
      << "problem " << spec.problem << "\n"
      << "alpha " << spec.alpha << "\n"
      << "effective_stages " << s_eff << "\n"
      << "sigma_dg " << res.dg.sigma_star << "\n"
      << "sigma_sc " << res.sc.sigma_star << "\n"
      << "ratio " << res.ratio() << "\n"
      << "sigma_dg_per_stage " << res.dg.sigma_star / s_eff << "\n"
      << "sigma_sc_per_stage " << res.sc.sigma_star / s_eff << "\n"
      << "spot_check_residual_dg " << res.dg.spot_check_residual << "\n"
      << "spot_check_residual_sc " << res.sc.spot_check_residual << "\n"
      << "sc_outside_at_sigma_dg " << res.sc_outside.size() << "\n";
  for (const auto& l : res.sc_outside) rep << "outside " << l.real() << " " << l.imag() << "\n";
  Paths out;
  emit(dir, "spectrum.csv", spectrum.to_string(), out);
  emit(dir, "region.csv", region.to_string(), out);
  emit(dir, "report.txt", rep.str(), out);
  return out;
}

ControllerConfig controller_from_config(const Config& cfg, std::string_view sec,
                                        const std::string& method) {
  auto c = ControllerConfig::for_method(method, cfg.get_double("tol", sec, 1e-5));
  c.tol_abs = cfg.get_double("tol_abs", sec, c.tol_abs);
  c.tol_rel = cfg.get_double("tol_rel", sec, c.tol_rel);
  c.beta = {cfg.get_double("beta1", sec, c.beta[0]), cfg.get_double("beta2", sec, c.beta[1]),
            cfg.get_double("beta3", sec, c.beta[2])};
  c.accept_safety = cfg.get_double("accept_safety", sec, c.accept_safety);
  c.w_min = cfg.get_double("w_min", sec, c.w_min);
  if (const auto r = cfg.find("ref_choice", sec)) c.ref_choice = parse_reference_choice(*r);
  try {
    c.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return c;
}

Paths experiment_coldstart(const Config& cfg, const std::filesystem::path& dir) {
  const std::string sec = "coldstart";
  const auto spec = coldstart_problem(cfg);
  const auto method = cfg.get_string("method", sec, "BS3_3F");
  const auto tab = builtin(method);
  const auto problem = make_problem(spec);
  const auto res = run_coldstart(problem, tab, controller_from_config(cfg, sec, method),
                                 cfg.get_bool("bisect", sec, true));
  std::ostringstream rep;
  rep.precision(17);
  rep << "method " << method << "\n"
      << "error_run_crashed " << res.error_run.crashed << "\n";
  if (res.error_run.crashed) rep << "error_run_message " << res.error_run.message << "\n";
  rep << "summary " << summary_line(res.error_run) << "\n"
      << "min_dt_first50 " << res.min_dt_first50 << "\n"
      << "median_dt_final_quartile " << res.median_dt_final_quartile << "\n"
      << "transient_ratio " << res.transient_ratio() << "\n"
      << "asymptotic_cfl " << res.asymptotic_cfl << "\n"
      << "cfl_run_crashed " << res.cfl_run.crashed << "\n"
      << "nu_survive " << res.nu_survive << "\n";
  Paths out;
  emit(dir, "trace.csv", res.error_run.trace.to_csv(), out);
  emit(dir, "coldstart.txt", rep.str(), out);
  return out;
}

Paths experiment_exner(const Config& cfg, const std::filesystem::path& dir) {
  const std::string sec = "exner_eigen";
  exner::SweExnerParams params;
  params.g = cfg.get_double("g", sec, params.g);
  params.sigma = cfg.get_double("sigma", sec, params.sigma);
  params.a_g = cfg.get_double("ag", sec, params.a_g);
  params.jacobian_42 = exner::parse_jacobian42(cfg.get_string("jacobian_42", sec, "squared"));
  try {
    params.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  csv::Table t;
  t.header = {"h",     "hv1",   "hv2",       "g",      "sigma",  "a_g",
              "root1", "root2", "root3",     "max_speed", "froude", "loose_bound_ratio"};
  auto add = [&](const exner::SweExnerState& s, const exner::SweExnerParams& p) {
    const auto r = exner::characteristic_roots(s, p);
    const double speed = exner::max_wave_speed(s, p);
    const double loose = std::abs(s.v1()) + std::sqrt(p.g * s.h);
    t.add_numbers({s.h, s.hv1, s.hv2, p.g, p.sigma, p.a_g, r[0], r[1], r[2], speed,
                   exner::froude(s, p), speed / loose});
  };
  if (cfg.get_bool("sweep", sec, false)) {
    const auto hs = cfg.get_list("h_values", sec, {0.5, 1.0, 2.0, 5.0, 10.0});
    const auto v1s = cfg.get_list("v1_values", sec, {0.0, 0.5, 1.0, 2.0});
    const auto ags = cfg.get_list("ag_values", sec, {0.0, 0.001, 0.005, 0.01});
    const double v2 = cfg.get_double("v2", sec, 0.0);
    for (double ag : ags)
      for (double h : hs)
        for (double v1 : v1s) {
          auto p = params;
          p.a_g = ag;
          add({h, h * v1, h * v2, 0.0}, p);
        }
  } else {
    add({cfg.get_double("h", sec, 10.0), cfg.get_double("hv1", sec, 10.0),
         cfg.get_double("hv2", sec, 0.0), 0.0},
        params);
  }
  Paths out;
  emit(dir, "exner.csv", t.to_string(), out);
  return out;
}

Paths experiment_cfl_bisect(const Config& cfg, const std::filesystem::path& dir) {
  const std::string sec = "cfl_bisect";
  const auto spec = ProblemSpec::from_config(cfg, sec);
  const auto tab = builtin(cfg.get_string("method", sec, "BS3_3F"));
  const auto problem = make_problem(spec);
  const auto b = bisect_problem_cfl(problem, tab, cfg.get_double("lo", sec, 0.05),
                                    cfg.get_double("hi", sec, 10.0));
  const auto base = run_cfl_control(problem, tab, b.nu_max);
  csv::Table t;
  t.header = {"name", "nu_max", "nu_crash", "runs", "FE", "A"};
  t.add_row({tab.name(), csv::format(b.nu_max), csv::format(b.nu_crash), std::to_string(b.runs),
             std::to_string(base.stats.n_fe), std::to_string(base.stats.n_accepted)});
  Paths out;
  emit(dir, "cfl_bisect.csv", t.to_string(), out);
  return out;
}

Paths experiment_convergence(const Config& cfg, const std::filesystem::path& dir) {
  const std::string sec = "convergence";
  const auto methods = cfg.get_words("methods", sec, {"BS3_3F", "SSP3_4"});
  csv::Table t;
  t.header = {"method", "solution", "steps", "error", "order"};
  for (const auto& m : methods) {
    const auto rows = run_convergence(builtin(m), cfg.get_int("levels", sec, 6),
                                      cfg.get_int("coarse_steps", sec, 16),
                                      cfg.get_double("t_end", sec, 2.0));
    for (const auto& r : rows)
      t.add_row({r.method, r.solution, std::to_string(r.steps), csv::format(r.error),
                 csv::format(r.order)});
  }
  Paths out;
  emit(dir, "convergence.csv", t.to_string(), out);
  return out;
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(const std::string& kind, const Config& cfg,
                                                  const std::filesystem::path& out_dir) {
  const auto k = normalize_experiment(kind);
  if (k == "plateau") return experiment_plateau(cfg, out_dir);
  if (k == "spectra") return experiment_spectra(cfg, out_dir);
  if (k == "coldstart") return experiment_coldstart(cfg, out_dir);
  if (k == "exner_eigen") return experiment_exner(cfg, out_dir);
  if (k == "cfl_bisect") return experiment_cfl_bisect(cfg, out_dir);
  return experiment_convergence(cfg, out_dir);
}

std::vector<std::filesystem::path> run_all(const Config& cfg,
                                           const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> outputs;
  for (const auto& name : cfg.get_words("experiments", "", {})) {
    const auto k = normalize_experiment(name);
    for (const auto& p : run_experiment(k, cfg, out_dir / k)) outputs.push_back(k / p);
  }
  std::ostringstream m;
  m << "rkctl " << version() << "\n"
    << "config_hash " << cfg.hash() << "\n"
    << "seed " << cfg.get_int("seed", "", 7) << "\n"
    << "outputs " << outputs.size() << "\n";
  for (const auto& p : outputs) m << "output " << join_path(p) << "\n";
  csv::write_text(out_dir / "manifest.txt", m.str());
  return outputs;
}

}  // namespace rkctl::experiments
