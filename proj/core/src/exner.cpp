#include "rkctl/exner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rkctl/errors.hpp"

namespace rkctl::exner {

namespace {

void require_depth(const SweExnerState& s) {
  if (!(s.h > 0.0)) throw DomainError("SWE-Exner: water height must be positive");
}

double cubic(double c2, double c1, double c0, double x) {
  return ((x + c2) * x + c1) * x + c0;
}

double polish(double c2, double c1, double c0, double x) {
  for (int it = 0; it < 3; ++it) {
    const double d = (3.0 * x + 2.0 * c2) * x + c1;
    if (d == 0.0) break;
    const double next = x - cubic(c2, c1, c0, x) / d;
    if (!std::isfinite(next) ||
        std::abs(cubic(c2, c1, c0, next)) >= std::abs(cubic(c2, c1, c0, x)))
      break;
    x = next;
  }
  return x;
}

}  // namespace

Jacobian42 parse_jacobian42(std::string_view text) {
  if (text == "as_printed") return Jacobian42::as_printed;
  if (text == "squared") return Jacobian42::squared;
  throw ConfigError("jacobian_42 must be as_printed or squared, got '" + std::string(text) + "'");
}

void SweExnerParams::validate() const {
  if (!(g > 0.0)) throw ContractViolation("SWE-Exner: g must be positive");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ContractViolation("SWE-Exner: sigma must lie in (0,1)");
  if (!(a_g >= 0.0 && a_g <= 1.0)) throw ContractViolation("SWE-Exner: a_g must lie in [0,1]");
  if (m_exp != 3) throw ContractViolation("SWE-Exner: only the Grass exponent 3 is supported");
}

std::array<double, 2> grass_discharge(std::array<double, 2> v, const SweExnerParams& params) {
  const double speed2 = v[0] * v[0] + v[1] * v[1];
  return {params.a_g * v[0] * speed2, params.a_g * v[1] * speed2};
}

Matrix4 flux_jacobian_x(const SweExnerState& state, const SweExnerParams& params) {
  require_depth(state);
  const double h = state.h, v1 = state.v1(), v2 = state.v2(), g = params.g;
  const double k = params.xi() * params.a_g / h;
  const double v2_term = params.jacobian_42 == Jacobian42::squared ? v2 * v2 : v2;
  Matrix4 j{};
  j[0] = {0.0, 1.0, 0.0, 0.0};
  j[1] = {g * h - v1 * v1, 2.0 * v1, 0.0, g * h};
  j[2] = {-v1 * v2, v2, v1, 0.0};
  j[3] = {-3.0 * k * v1 * (v1 * v1 + v2 * v2), k * (3.0 * v1 * v1 + v2_term), 2.0 * k * v1 * v2,
          0.0};
  return j;
}

std::array<double, 3> characteristic_coefficients(const SweExnerState& state,
                                                  const SweExnerParams& params, Direction dir) {
  require_depth(state);
  const double vn = dir == Direction::x ? state.v1() : state.v2();
  const double vt = dir == Direction::x ? state.v2() : state.v1();
  const double gh = params.g * state.h;
  const double coupling = params.g * params.xi() * params.a_g * (3.0 * vn * vn + vt * vt);
  return {-2.0 * vn, vn * vn - gh - coupling, coupling * vn};
}

std::array<double, 3> solve_real_cubic(double c2, double c1, double c0) {
  // x = t - c2/3 gives t^3 + p t + q.
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  const double scale = std::max(std::abs(4.0 * p * p * p), 27.0 * q * q);
  if (disc < -1e-12 * scale)
    throw HyperbolicityLossError("characteristic cubic has a complex root pair");

  std::array<double, 3> t{};
  if (p >= 0.0) {
    // Triple root (p == q == 0 up to rounding).
    t.fill(std::cbrt(-q));
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) t[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  }
  std::array<double, 3> roots{};
  for (int k = 0; k < 3; ++k) roots[k] = polish(c2, c1, c0, t[k] - shift);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::array<double, 3> characteristic_roots(const SweExnerState& state,
                                           const SweExnerParams& params, Direction dir) {
  const auto c = characteristic_coefficients(state, params, dir);
  return solve_real_cubic(c[0], c[1], c[2]);
}

double max_wave_speed(const SweExnerState& state, const SweExnerParams& params, Direction dir) {
  const auto r = characteristic_roots(state, params, dir);
  const double vn = dir == Direction::x ? state.v1() : state.v2();
  return std::max({std::abs(vn), std::abs(r[0]), std::abs(r[2])});
}

double froude(const SweExnerState& state, const SweExnerParams& params) {
  require_depth(state);
  return std::hypot(state.v1(), state.v2()) / std::sqrt(params.g * state.h);
}

}  // namespace rkctl::exner
