#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rkctl/dgsem.hpp"
#include "rkctl/errors.hpp"

namespace rkctl::dgsem {

namespace {

using Vec3 = std::array<double, 3>;

inline Vec3 load(std::span<const double> u, std::size_t node) {
  return {u[3 * node], u[3 * node + 1], u[3 * node + 2]};
}

inline double pressure_of(const Vec3& s, double gamma) {
  return (gamma - 1.0) * (s[2] - 0.5 * s[1] * s[1] / s[0]);
}

void check_state(const Vec3& s, double gamma, std::size_t node) {
  if (!(s[0] > 0.0) || !std::isfinite(s[1]) || !std::isfinite(s[2]))
    throw SolutionError("Euler1D: non-positive density at node " + std::to_string(node));
  if (!(pressure_of(s, gamma) > 0.0))
    throw SolutionError("Euler1D: non-positive pressure at node " + std::to_string(node));
}

inline Vec3 physical_flux(const Vec3& s, double gamma) {
  const double v = s[1] / s[0];
  const double p = pressure_of(s, gamma);
  return {s[1], s[1] * v + p, (s[2] + p) * v};
}

inline double max_speed(const Vec3& s, double gamma) {
  return std::abs(s[1] / s[0]) + std::sqrt(gamma * pressure_of(s, gamma) / s[0]);
}

Vec3 llf(const Vec3& l, const Vec3& r, double gamma) {
  const Vec3 fl = physical_flux(l, gamma), fr = physical_flux(r, gamma);
  const double lam = std::max(max_speed(l, gamma), max_speed(r, gamma));
  Vec3 f;
  for (int v = 0; v < 3; ++v) f[v] = 0.5 * (fl[v] + fr[v]) - 0.5 * lam * (r[v] - l[v]);
  return f;
}

}  // namespace

EulerState euler_from_primitive(double rho, double v, double p, double gamma) {
  return {rho, rho * v, p / (gamma - 1.0) + 0.5 * rho * v * v};
}

double euler_pressure(const EulerState& s, double gamma) {
  return pressure_of({s.rho, s.mom, s.energy}, gamma);
}

double euler_max_speed(const EulerState& s, double gamma) {
  return max_speed({s.rho, s.mom, s.energy}, gamma);
}

Euler1D::Euler1D(Mesh1D mesh, double gamma, EulerBoundary boundary, EulerState left_state,
                 EulerState right_state)
    : mesh_(std::move(mesh)),
      gamma_(gamma),
      boundary_(boundary),
      left_(left_state),
      right_(right_state) {
  if (!(gamma > 1.0)) throw ContractViolation("Euler1D: gamma must exceed 1");
  if (boundary == EulerBoundary::dirichlet) {
    check_state({left_.rho, left_.mom, left_.energy}, gamma_, 0);
    check_state({right_.rho, right_.mom, right_.energy}, gamma_, 0);
  }
}

void Euler1D::rhs(std::span<const double> u, std::span<double> du) const {
  if (u.size() != size() || du.size() != size())
    throw ContractViolation("Euler1D: state has the wrong length");
  const int n = mesh_.ref.num_nodes(), p = n - 1, ne = mesh_.elements;
  const auto nodes = mesh_.num_nodes();
  for (std::size_t k = 0; k < nodes; ++k) check_state(load(u, k), gamma_, k);

  // Interface fluxes; face e sits left of element e, face ne is the right end.
  std::vector<Vec3> face(static_cast<std::size_t>(ne + 1));
  for (int f = 0; f <= ne; ++f) {
    Vec3 l, r;
    if (f == 0 || f == ne) {
      if (boundary_ == EulerBoundary::periodic) {
        l = load(u, static_cast<std::size_t>((ne - 1) * n + p));
        r = load(u, 0);
      } else if (f == 0) {
        l = {left_.rho, left_.mom, left_.energy};
        r = load(u, 0);
      } else {
        l = load(u, static_cast<std::size_t>((ne - 1) * n + p));
        r = {right_.rho, right_.mom, right_.energy};
      }
    } else {
      l = load(u, static_cast<std::size_t>((f - 1) * n + p));
      r = load(u, static_cast<std::size_t>(f * n));
    }
    face[static_cast<std::size_t>(f)] = llf(l, r, gamma_);
  }

  const double scale = 2.0 / mesh_.h;
  const auto& w = mesh_.ref.weights();
  std::vector<Vec3> flux(static_cast<std::size_t>(n));
  for (int e = 0; e < ne; ++e) {
    const auto base = static_cast<std::size_t>(e * n);
    for (int i = 0; i < n; ++i)
      flux[static_cast<std::size_t>(i)] = physical_flux(load(u, base + i), gamma_);
    for (int i = 0; i < n; ++i) {
      Vec3 r{0.0, 0.0, 0.0};
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < 3; ++v)
          r[v] += mesh_.ref.derivative(i, m) * flux[static_cast<std::size_t>(m)][v];
      if (i == p)
        for (int v = 0; v < 3; ++v)
          r[v] += (face[static_cast<std::size_t>(e + 1)][v] - flux[static_cast<std::size_t>(p)][v]) /
                  w[static_cast<std::size_t>(p)];
      if (i == 0)
        for (int v = 0; v < 3; ++v)
          r[v] -= (face[static_cast<std::size_t>(e)][v] - flux[0][v]) / w[0];
      for (int v = 0; v < 3; ++v) du[3 * (base + i) + v] = -scale * r[v];
    }
  }
}

WaveSpeedFunction Euler1D::wavespeed() const {
  return [gamma = gamma_](std::span<const double> u, std::size_t node, std::span<double> out) {
    const Vec3 s = load(u, node);
    check_state(s, gamma, node);
    out[0] = max_speed(s, gamma);
  };
}

std::array<double, 3> Euler1D::totals(std::span<const double> u) const {
  const auto m = mesh_.mass();
  std::array<double, 3> t{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < m.size(); ++k)
    for (int v = 0; v < 3; ++v) t[v] += m[k] * u[3 * k + v];
  return t;
}

}  // namespace rkctl::dgsem
