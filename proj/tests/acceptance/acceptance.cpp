// Acceptance checks: one PASS/FAIL line per criterion.
//
//   rkctl_acceptance [--only N ...] [--known-red N ...]
//
// Exits 0 when every failing criterion is listed as known red.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rkctl/controller.hpp"
#include "rkctl/errors.hpp"
#include "rkctl/exner.hpp"
#include "rkctl/experiments.hpp"
#include "rkctl/integrator.hpp"
#include "rkctl/tableau.hpp"

using namespace rkctl;
namespace ex = rkctl::experiments;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
  [[nodiscard]] std::string text() const { return detail.str() + failures; }
};

const std::vector<std::string> kMethods{"BS3_3F", "SSP3_4"};

// ---------------------------------------------------------------------------

void criterion_accounting(Verdict& v) {
  struct Row {
    const char* name;
    int stages;
    bool fsal;
    std::int64_t a, r, fe;
  };
  const Row rows[] = {{"BS3", 3, true, 724, 4, 2187},      {"RDPK3_5F", 5, true, 368, 4, 1863},
                      {"SSP3_4", 4, false, 384, 3, 1550},  {"BS3", 3, true, 2511, 2, 7542},
                      {"RDPK4_9F", 9, true, 722, 4, 6537}, {"SSP3_4", 4, false, 1367, 2, 5478}};
  int exact = 0;
  for (const auto& r : rows) {
    const auto fe =
        expected_function_evaluations(r.stages, r.fsal, ControlKind::error_based, r.a, r.r);
    v.require(fe == r.fe, std::string(r.name) + " " + std::to_string(fe) + " != " +
                              std::to_string(r.fe));
    exact += fe == r.fe;
  }
  ex::ProblemSpec spec;
  spec.problem = "advection1d";
  spec.elements = 8;
  spec.t_end = 2.0;
  const auto problem = ex::make_problem(spec);
  int runs = 0;
  for (const auto& m : kMethods) {
    const auto tab = builtin(m);
    for (double tol : {1e-3, 1e-5, 1e-7}) {
      const auto r = ex::run_error_control(problem, tab, ControllerConfig::for_method(m, tol));
      v.require(!r.crashed && r.stats.n_fe == expected_function_evaluations(
                                                  tab.stages(), tab.fsal(), ControlKind::error_based,
                                                  r.stats.n_accepted, r.stats.n_rejected),
                "error-control identity " + m);
      ++runs;
    }
    const auto r0 = ex::run_error_control(problem, tab, ControllerConfig::for_method(m, 1e-5), 1e-3);
    v.require(r0.stats.n_fe == expected_function_evaluations(tab.stages(), tab.fsal(),
                                                             ControlKind::error_based,
                                                             r0.stats.n_accepted,
                                                             r0.stats.n_rejected, false),
              "identity with dt_init " + m);
    const auto c = ex::run_cfl_control(problem, tab, 0.5);
    v.require(!c.crashed && c.stats.n_fe == expected_function_evaluations(
                                                tab.stages(), tab.fsal(), ControlKind::cfl_based,
                                                c.stats.n_accepted, 0),
              "CFL-control identity " + m);
    runs += 2;
  }
  v.detail << "table rows exact " << exact << "/6; integrator identities on " << runs
           << " desk runs";
}

void criterion_controller(Verdict& v) {
  v.require(limiter(1.0) == 1.0, "kappa(1) = 1");
  std::mt19937_64 rng(5);
  // Strict bounds while atan(a - 1) is distinguishable from pi/2 in double
  // precision; beyond that the value rounds to the bound itself.
  std::uniform_real_distribution<double> x(-50.0, std::log(1e6));
  bool in_range = true;
  for (int i = 0; i < 100000; ++i) {
    const double k = limiter(std::exp(x(rng)));
    in_range = in_range && k > 1.0 - std::numbers::pi / 2.0 && k < 1.0 + std::numbers::pi / 2.0;
  }
  for (double a : {1e8, 1e16, 1e300})
    in_range = in_range && limiter(a) <= 1.0 + std::numbers::pi / 2.0;
  v.require(in_range, "kappa range");

  ControllerConfig cfg;
  cfg.beta = {0.60, -0.20, 0.00};
  cfg.k = 3;
  ControllerState s;
  s.dt = 1.0;
  const auto d = propose(s, 1e-3, cfg);
  const double want = 1.0 + std::atan(std::pow(1000.0, 0.2) - 1.0);
  v.require(std::abs(d.dt_factor - want) <= 1e-12,
            "worked PID example");

  ControllerConfig one;
  one.beta = {1.0, 0.0, 0.0};
  one.k = 1;
  const double a = 1.0 + std::tan(0.81 - 1.0);
  const bool threshold = propose(s, 1.0 / (a * (1.0 + 1e-9)), one).accept &&
                         !propose(s, 1.0 / (a * (1.0 - 1e-9)), one).accept;
  v.require(threshold, "accept threshold 0.81");

  const auto z = propose(s, 0.0, cfg);
  v.require(std::isfinite(z.dt_factor) && std::isfinite(z.new_state.eps_n), "w_min clamp");
  v.detail << "dt_factor " << d.dt_factor << ", clamp at w=0 gives " << z.dt_factor;
}

void criterion_convergence(Verdict& v) {
  for (const auto& m : kMethods) {
    const auto tab = builtin(m);
    const auto rows = ex::run_convergence(tab, 6, 16, 2.0);
    double lo_main = 1e9, hi_main = -1e9, lo_emb = 1e9, hi_emb = -1e9;
    for (const auto& r : rows) {
      if (std::isnan(r.order)) continue;
      auto& lo = r.solution == "main" ? lo_main : lo_emb;
      auto& hi = r.solution == "main" ? hi_main : hi_emb;
      lo = std::min(lo, r.order);
      hi = std::max(hi, r.order);
    }
    v.require(lo_main >= 2.8 && hi_main <= 3.2, m + " main order");
    v.require(lo_emb >= 1.7 && hi_emb <= 2.3, m + " embedded order");
    v.detail << m << " main [" << lo_main << ", " << hi_main << "] embedded [" << lo_emb << ", "
             << hi_emb << "]; ";
  }
}

struct PlateauSummary {
  ex::PlateauResult res;
  bool all_completed = true;
  double fe_spread = 0.0;
  std::int64_t fe_max = 0;
  double worst_reject_ratio = 0.0;
};

PlateauSummary plateau_on(const std::string& problem) {
  Config cfg;
  cfg.set("plateau.problem", problem);
  const auto spec = ex::plateau_problem(cfg);
  PlateauSummary s;
  s.res = ex::run_plateau(ex::make_problem(spec), builtin("BS3_3F"), {1e-4, 1e-5, 1e-6, 1e-7},
                          0.05, 10.0);
  std::int64_t lo = INT64_MAX;
  for (const auto& r : s.res.rows) {
    s.all_completed = s.all_completed && !r.crashed;
    lo = std::min(lo, r.stats.n_fe);
    s.fe_max = std::max(s.fe_max, r.stats.n_fe);
    s.worst_reject_ratio =
        std::max(s.worst_reject_ratio,
                 static_cast<double>(r.stats.n_rejected) / static_cast<double>(r.stats.n_accepted));
  }
  s.fe_spread = static_cast<double>(s.fe_max - lo) / static_cast<double>(lo);
  return s;
}

std::vector<PlateauSummary>& plateau_cache() {
  static std::vector<PlateauSummary> cache;
  if (cache.empty()) {
    cache.push_back(plateau_on("advection2d"));
    cache.push_back(plateau_on("advection2d_curved"));
  }
  return cache;
}

void criterion_plateau(Verdict& v) {
  const auto& p = plateau_cache();
  const auto& cart = p[0];
  const auto& warped = p[1];
  const double baseline = static_cast<double>(cart.res.baseline.n_fe);
  const double vs_baseline = static_cast<double>(cart.fe_max) / baseline;
  v.require(cart.fe_spread < 0.05, "FE spread < 5%");
  v.require(vs_baseline <= 1.10, "FE <= 1.10x CFL baseline");
  v.require(cart.all_completed && warped.all_completed, "all tolerances complete on both meshes");
  const double nu_c = cart.res.bisection.nu_max, nu_w = warped.res.bisection.nu_max;
  const double nu_diff = std::abs(nu_c - nu_w) / std::min(nu_c, nu_w);
  v.require(nu_diff > 0.10, "nu_max differs by > 10%");
  v.detail << "cartesian FE spread " << 100.0 * cart.fe_spread << "%, max FE / baseline "
           << vs_baseline << " (baseline " << cart.res.baseline.n_fe << "); warped FE spread "
           << 100.0 * warped.fe_spread << "%; nu_max " << nu_c << " vs " << nu_w << " ("
           << 100.0 * nu_diff << "%)";
}

void criterion_spectra(Verdict& v) {
  const auto spec = ex::spectra_problem(Config{});
  for (const auto& m : kMethods) {
    const auto r = ex::run_spectra(spec, builtin(m));
    const double ratio = r.ratio();
    if (m == "BS3_3F") {
      v.require(ratio >= 1.15 && ratio <= 1.40, "BS3 ratio in [1.15, 1.40]");
      v.require(!r.sc_outside.empty(), "BS3 out-of-region SC eigenvalues reported");
    } else {
      v.require(ratio >= 1.00 && ratio <= 1.15, "SSP3_4 ratio in [1.00, 1.15]");
    }
    const double res = std::max(r.dg.spot_check_residual, r.sc.spot_check_residual);
    v.require(res <= 1e-8, m + " eigen residual");
    v.detail << m << " ratio " << ratio << " (sigma " << r.dg.sigma_star << " / "
             << r.sc.sigma_star << "), SC outside " << r.sc_outside.size() << ", residual "
             << res << "; ";
  }
  v.detail << "n = " << ex::make_problem(spec).size();
}

void criterion_exner(Verdict& v) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> logh(std::log(0.1), std::log(100.0)), vel(-10.0, 10.0),
      ag(0.0, 0.01);
  exner::SweExnerParams p;
  int checked = 0, lost = 0;
  double worst = 0.0;
  bool lost_consistent = true;
  while (checked < 100000) {
    p.a_g = ag(rng);
    const double h = std::exp(logh(rng)), v1 = vel(rng), v2 = vel(rng);
    if (v1 * v1 + v2 * v2 > 100.0) continue;
    const exner::SweExnerState s{h, h * v1, h * v2, 0.0};
    const auto j = exner::flux_jacobian_x(s, p);
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m(r, c) = j[r][c];
    const Eigen::EigenSolver<Eigen::Matrix4d> solver(m, false);
    std::array<double, 4> oracle{};
    double imag = 0.0;
    for (int i = 0; i < 4; ++i) {
      oracle[i] = solver.eigenvalues()[i].real();
      imag = std::max(imag, std::abs(solver.eigenvalues()[i].imag()));
    }
    if (imag > 1e-9) {
      ++lost;
      try {
        (void)exner::characteristic_roots(s, p);
        lost_consistent = false;
      } catch (const HyperbolicityLossError&) {
      }
      continue;
    }
    const auto r = exner::characteristic_roots(s, p);
    std::array<double, 4> mine{r[0], r[1], r[2], v1};
    std::sort(mine.begin(), mine.end());
    std::sort(oracle.begin(), oracle.end());
    for (int i = 0; i < 4; ++i)
      worst = std::max(worst, std::abs(mine[i] - oracle[i]) / std::max(1.0, std::abs(oracle[i])));
    ++checked;
  }
  v.require(worst <= 1e-8, "roots vs dense eigensolver");
  v.require(lost_consistent, "non-hyperbolic states reported");

  exner::SweExnerParams dry = p;
  dry.a_g = 0.0;
  const exner::SweExnerState s0{4.0, 6.0, 2.0, 0.0};
  const double c = std::sqrt(dry.g * 4.0);
  const auto r0 = exner::characteristic_roots(s0, dry);
  const double closed = std::max({std::abs(r0[0] - (1.5 - c)), std::abs(r0[1]),
                                  std::abs(r0[2] - (1.5 + c))});
  v.require(closed <= 1e-10, "A_g = 0 closed form");

  const double fr = exner::froude({10.0, 10.0, 0.0, 0.0}, exner::SweExnerParams{});
  v.require(std::abs(fr - 0.1010) <= 1e-3, "Froude of the dune state");
  v.detail << checked << " states, worst relative deviation " << worst << " (" << lost
           << " non-hyperbolic draws skipped); A_g=0 error " << closed << "; Fr " << fr;
}

void criterion_coldstart(Verdict& v) {
  const Config cfg;
  const auto spec = ex::coldstart_problem(cfg);
  const auto res = ex::run_coldstart(ex::make_problem(spec), builtin("BS3_3F"),
                                     ControllerConfig::for_method("BS3_3F", 1e-5), true);
  v.require(!res.error_run.crashed, "error-controlled run completes");
  const double ratio = res.transient_ratio();
  v.require(ratio >= 3.0, "final-quartile median dt >= 3x early minimum");
  const bool reduced = res.nu_survive <= 0.9 * res.asymptotic_cfl;
  v.require(res.cfl_run.crashed || reduced, "CFL run at asymptotic CFL crashes or needs -10%");
  v.detail << "transient ratio " << ratio << "; asymptotic CFL " << res.asymptotic_cfl
           << ", CFL run " << (res.cfl_run.crashed ? "crashed" : "survived") << ", surviving nu "
           << res.nu_survive;
}

void criterion_rejections(Verdict& v) {
  const auto& p = plateau_cache();
  const double worst = std::max(p[0].worst_reject_ratio, p[1].worst_reject_ratio);
  v.require(worst <= 0.01, "#R <= 1% of #A");
  v.detail << "worst #R/#A " << 100.0 * worst << "% over " << p[0].res.rows.size() + p[1].res.rows.size()
           << " plateau runs";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rkctl acceptance checks"};
  std::vector<int> only, known_red;
  app.add_option("--only", only, "criteria to run");
  app.add_option("--known-red", known_red, "criteria whose failure does not fail the run");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
      {"FE accounting", criterion_accounting},
      {"controller", criterion_controller},
      {"convergence orders", criterion_convergence},
      {"tolerance plateau", criterion_plateau},
      {"spectrum embedding", criterion_spectra},
      {"Exner algebra", criterion_exner},
      {"cold start", criterion_coldstart},
      {"rejection economy", criterion_rejections},
  };

  const std::set<int> selected(only.begin(), only.end());
  const std::set<int> red(known_red.begin(), known_red.end());
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.failures += std::string(" [exception: ") + e.what() + "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s (%.1f s)%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first,
                v.text().c_str(), secs, !v.pass && red.count(id) ? " [known red]" : "");
    std::fflush(stdout);
    if (!v.pass && !red.count(id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
