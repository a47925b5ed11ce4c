#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rkctl {

/// Node-wise metric terms of a (possibly curved) DG mesh: the Jacobian
/// determinant J_i and the contravariant vectors (J d xi^j / dx)_i.
struct MeshMetrics {
  int dim = 1;
  int degree = 1;
  std::vector<double> jacobian;  // one entry per node
  /// dim * dim entries per node; entries [j * dim, (j + 1) * dim) hold the
  /// contravariant vector of reference direction j.
  std::vector<double> contravariant;

  [[nodiscard]] std::size_t num_nodes() const noexcept { return jacobian.size(); }
  [[nodiscard]] std::span<const double> contravariant_at(std::size_t node,
                                                         int direction) const {
    return {contravariant.data() + (node * dim + direction) * dim,
            static_cast<std::size_t>(dim)};
  }

  /// Throws ContractViolation unless J > 0 everywhere, dim in {1,2}, degree >= 1.
  void validate() const;
};

/// Wave-speed vector at a node for the state u, written to `speed` (length dim).
using WaveSpeedFunction =
    std::function<void(std::span<const double> u, std::size_t node, std::span<double> speed)>;

/// (2 / (p + 1)) J_i / sum_j |(J d xi^j/dx)_i . a|.
[[nodiscard]] double local_dx_over_lambda(std::size_t node, std::span<const double> a,
                                          const MeshMetrics& metrics);

/// min_i dx_i / lambda_max(u_i) over all nodes.
[[nodiscard]] double mesh_limit(std::span<const double> u, const MeshMetrics& metrics,
                                const WaveSpeedFunction& wavespeed);

/// nu * mesh_limit(u).
[[nodiscard]] double cfl_dt(double nu, std::span<const double> u, const MeshMetrics& metrics,
                            const WaveSpeedFunction& wavespeed);

/// A constant advection velocity as a wave-speed provider.
[[nodiscard]] WaveSpeedFunction constant_velocity(std::vector<double> a);

/// Returns true when the simulation at CFL number nu finished without blow-up.
using CflRunner = std::function<bool(double nu)>;

struct BisectionResult {
  double nu_max;  // largest verified-stable CFL number
  double nu_crash;
  int runs;
};

inline constexpr double kCflBisectionRelativeWidth = 5e-3;

/// Bisects on crash / no-crash until hi / lo < 1 + 5e-3. Throws BracketError
/// when runner(lo) crashes or runner(hi) succeeds.
[[nodiscard]] BisectionResult bisect_max_cfl_detailed(const CflRunner& runner, double lo,
                                                      double hi);
[[nodiscard]] double bisect_max_cfl(const CflRunner& runner, double lo, double hi);

}  // namespace rkctl
