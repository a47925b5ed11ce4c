#include "rkctl/cfl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rkctl/errors.hpp"

namespace rkctl {

void MeshMetrics::validate() const {
  if (dim != 1 && dim != 2) throw ContractViolation("mesh metrics: dim must be 1 or 2");
  if (degree < 1) throw ContractViolation("mesh metrics: degree must be >= 1");
  if (contravariant.size() != jacobian.size() * static_cast<std::size_t>(dim * dim))
    throw ContractViolation("mesh metrics: contravariant storage has the wrong size");
  for (std::size_t i = 0; i < jacobian.size(); ++i)
    if (!(jacobian[i] > 0.0))
      throw ContractViolation("mesh metrics: non-positive Jacobian at node " +
                              std::to_string(i));
}

double local_dx_over_lambda(std::size_t node, std::span<const double> a,
                            const MeshMetrics& metrics) {
  if (a.size() != static_cast<std::size_t>(metrics.dim))
    throw ContractViolation("local_dx_over_lambda: velocity has the wrong dimension");
  double denom = 0.0;
  for (int j = 0; j < metrics.dim; ++j) {
    const auto ja = metrics.contravariant_at(node, j);
    double dot = 0.0;
    for (int k = 0; k < metrics.dim; ++k) dot += ja[k] * a[k];
    denom += std::abs(dot);
  }
  if (!(denom > 0.0))
    throw ContractViolation("local_dx_over_lambda: zero wave speed at node " +
                            std::to_string(node));
  return 2.0 / (metrics.degree + 1) * metrics.jacobian[node] / denom;
}

double mesh_limit(std::span<const double> u, const MeshMetrics& metrics,
                  const WaveSpeedFunction& wavespeed) {
  std::vector<double> a(static_cast<std::size_t>(metrics.dim));
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < metrics.num_nodes(); ++i) {
    wavespeed(u, i, a);
    for (double v : a)
      if (!std::isfinite(v)) throw SolutionError("non-finite wave speed at node " + std::to_string(i));
    limit = std::min(limit, local_dx_over_lambda(i, a, metrics));
  }
  return limit;
}

double cfl_dt(double nu, std::span<const double> u, const MeshMetrics& metrics,
              const WaveSpeedFunction& wavespeed) {
  if (!(nu > 0.0)) throw ContractViolation("cfl_dt: nu must be > 0");
  return nu * mesh_limit(u, metrics, wavespeed);
}

WaveSpeedFunction constant_velocity(std::vector<double> a) {
  return [a = std::move(a)](std::span<const double>, std::size_t, std::span<double> out) {
    std::copy(a.begin(), a.end(), out.begin());
  };
}

BisectionResult bisect_max_cfl_detailed(const CflRunner& runner, double lo, double hi) {
  if (!(lo > 0.0 && lo < hi)) throw BracketError("bisect_max_cfl: need 0 < lo < hi");
  BisectionResult r{lo, hi, 0};
  ++r.runs;
  if (!runner(lo)) throw BracketError("bisect_max_cfl: simulation crashes at lo");
  ++r.runs;
  if (runner(hi)) throw BracketError("bisect_max_cfl: simulation survives at hi");
  while (hi / lo >= 1.0 + kCflBisectionRelativeWidth) {
    const double mid = 0.5 * (lo + hi);
    ++r.runs;
    (runner(mid) ? lo : hi) = mid;
  }
  r.nu_max = lo;
  r.nu_crash = hi;
  return r;
}

double bisect_max_cfl(const CflRunner& runner, double lo, double hi) {
  return bisect_max_cfl_detailed(runner, lo, hi).nu_max;
}

}  // namespace rkctl
