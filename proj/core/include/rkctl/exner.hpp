#pragma once

#include <array>
#include <string_view>

namespace rkctl::exner {

/// Which form of the (4,2) entry of the x-flux Jacobian to build:
/// xi A_g (3 v1^2 + v2) / h as typeset, or xi A_g (3 v1^2 + v2^2) / h, which
/// is the one consistent with the characteristic cubic.
enum class Jacobian42 { as_printed, squared };

[[nodiscard]] Jacobian42 parse_jacobian42(std::string_view text);

struct SweExnerParams {
  double g = 9.8;
  double sigma = 0.4;  // bed porosity
  double a_g = 0.001;  // Grass constant
  int m_exp = 3;       // Grass exponent; only 3 is supported
  Jacobian42 jacobian_42 = Jacobian42::squared;

  [[nodiscard]] double xi() const noexcept { return 1.0 / (1.0 - sigma); }
  /// Throws ContractViolation unless g > 0, 0 < sigma < 1, 0 <= a_g <= 1, m_exp == 3.
  void validate() const;
};

/// Conserved variables (h, h v1, h v2) and the bed height b.
struct SweExnerState {
  double h = 1.0;
  double hv1 = 0.0;
  double hv2 = 0.0;
  double b = 0.0;

  [[nodiscard]] double v1() const noexcept { return hv1 / h; }
  [[nodiscard]] double v2() const noexcept { return hv2 / h; }
};

enum class Direction { x, y };

/// Grass bedload discharge A_g v |v|^2.
[[nodiscard]] std::array<double, 2> grass_discharge(std::array<double, 2> v,
                                                    const SweExnerParams& params);

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Jacobian of the x-fluxes with respect to (h, h v1, h v2, b), including the
/// non-conservative bed-slope term g h in the momentum row. Throws DomainError
/// for h <= 0.
[[nodiscard]] Matrix4 flux_jacobian_x(const SweExnerState& state, const SweExnerParams& params);

/// Coefficients (c2, c1, c0) of the monic cubic
/// l^3 + c2 l^2 + c1 l + c0 whose roots are the three coupled wave speeds in
/// `dir`; the remaining Jacobian eigenvalue is the velocity component along `dir`.
[[nodiscard]] std::array<double, 3> characteristic_coefficients(const SweExnerState& state,
                                                                const SweExnerParams& params,
                                                                Direction dir = Direction::x);

/// Three real roots of l^3 + c2 l^2 + c1 l + c0, ascending, from the
/// trigonometric form of Cardano's formula followed by Newton polishing.
/// Throws HyperbolicityLossError when the cubic has a complex pair.
[[nodiscard]] std::array<double, 3> solve_real_cubic(double c2, double c1, double c0);

[[nodiscard]] std::array<double, 3> characteristic_roots(const SweExnerState& state,
                                                         const SweExnerParams& params,
                                                         Direction dir = Direction::x);

/// max(|v_dir|, |roots|), the wave speed used for CFL control.
[[nodiscard]] double max_wave_speed(const SweExnerState& state, const SweExnerParams& params,
                                    Direction dir = Direction::x);

/// |v| / sqrt(g h).
[[nodiscard]] double froude(const SweExnerState& state, const SweExnerParams& params);

}  // namespace rkctl::exner
