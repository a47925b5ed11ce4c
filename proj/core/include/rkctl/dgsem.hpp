#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rkctl/cfl.hpp"

namespace rkctl::dgsem {

/// Legendre-Gauss-Lobatto collocation on [-1, 1].
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] int num_nodes() const noexcept { return degree_ + 1; }
  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  /// Collocation derivative matrix, row-major.
  [[nodiscard]] double derivative(int i, int j) const noexcept {
    return d_[static_cast<std::size_t>(i * (degree_ + 1) + j)];
  }

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> d_;
};

/// Uniform periodic 1D mesh of `elements` cells on [left, right].
struct Mesh1D {
  Mesh1D(int elements, int degree, double left, double right);

  int elements;
  ReferenceElement ref;
  double left, right;
  double h;
  std::vector<double> x;  // node coordinates, element-major

  [[nodiscard]] std::size_t num_nodes() const noexcept { return x.size(); }
  [[nodiscard]] MeshMetrics metrics() const;
  /// Quadrature weight J * omega_i of every node.
  [[nodiscard]] std::vector<double> mass() const;
};

/// Parameters of the sequential warp of [c - L/2, c + L/2]^2. The mapped y
/// depends on (xi, eta); the mapped x depends on xi and the mapped y.
struct WarpParameters {
  double length_x = 2.0 * 3.14159265358979323846;
  double length_y = 2.0 * 3.14159265358979323846;
  double center_x = 0.0;
  double center_y = 0.0;
  /// Multiplies the default warp amplitude L / 8; zero gives the identity.
  double amplitude = 1.0;
};

/// Maps scaled reference coordinates (xi, eta) to physical (x, y).
[[nodiscard]] std::array<double, 2> curved_mapping_2d(double xi, double eta,
                                                      const WarpParameters& params);

/// Periodic N x N quadrilateral mesh. Node coordinates come from the exact
/// mapping; metric terms are the collocation derivatives of those nodal
/// coordinates, which keeps the discrete metric identities exact.
struct Mesh2D {
  /// Cartesian mesh of [lo, hi]^2.
  static Mesh2D cartesian(int elements, int degree, double lo, double hi);
  /// Warped mesh of the square described by `params`.
  static Mesh2D warped(int elements, int degree, const WarpParameters& params);

  int elements;
  ReferenceElement ref;
  // Per node, index ((ey * N + ex) * n + j) * n + i with i along xi.
  std::vector<double> x, y;
  std::vector<double> jacobian;
  std::vector<double> ja1;  // (J dxi/dx, J dxi/dy) interleaved
  std::vector<double> ja2;  // (J deta/dx, J deta/dy) interleaved

  [[nodiscard]] int nodes_per_dir() const noexcept { return ref.num_nodes(); }
  [[nodiscard]] std::size_t num_nodes() const noexcept { return jacobian.size(); }
  [[nodiscard]] std::size_t node_index(int ex, int ey, int i, int j) const noexcept {
    const int n = nodes_per_dir();
    return ((static_cast<std::size_t>(ey) * elements + ex) * n + j) * n + i;
  }
  [[nodiscard]] MeshMetrics metrics() const;
  [[nodiscard]] std::vector<double> mass() const;

 private:
  Mesh2D(int elements, int degree);
  template <class Map>
  void build(const Map& map, double lo_x, double lo_y, double len_x, double len_y);
};

/// Weak/strong-form DGSEM (equivalent on LGL nodes) for u_t + a u_x = 0 with
/// upwind (local Lax-Friedrichs) interface fluxes, optionally blended with a
/// first-order finite-volume operator on the LGL subcells:
/// rhs = (1 - alpha) * DG + alpha * FV.
class Advection1D {
 public:
  Advection1D(Mesh1D mesh, double velocity, double alpha = 0.0);

  void rhs(std::span<const double> u, std::span<double> du) const;
  void dg_rhs(std::span<const double> u, std::span<double> du) const;
  void fv_rhs(std::span<const double> u, std::span<double> du) const;

  [[nodiscard]] const Mesh1D& mesh() const noexcept { return mesh_; }
  [[nodiscard]] double velocity() const noexcept { return a_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] std::size_t size() const noexcept { return mesh_.num_nodes(); }

 private:
  double interface_flux(double ul, double ur) const noexcept;

  Mesh1D mesh_;
  double a_;
  double alpha_;
};

/// 2D counterpart of Advection1D on Cartesian or curved periodic meshes.
/// Subcell normals of the FV part are accumulated from the element face
/// normal with the collocation derivative, so constants are preserved.
class Advection2D {
 public:
  Advection2D(Mesh2D mesh, std::array<double, 2> velocity, double alpha = 0.0);

  void rhs(std::span<const double> u, std::span<double> du) const;
  void dg_rhs(std::span<const double> u, std::span<double> du) const;
  void fv_rhs(std::span<const double> u, std::span<double> du) const;

  [[nodiscard]] const Mesh2D& mesh() const noexcept { return mesh_; }
  [[nodiscard]] std::array<double, 2> velocity() const noexcept { return a_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] std::size_t size() const noexcept { return mesh_.num_nodes(); }

 private:
  Mesh2D mesh_;
  std::array<double, 2> a_;
  double alpha_;
  // Contravariant speeds Ja^j . a per node and their subcell-interface values
  // (n + 1 per line of nodes).
  std::vector<double> speed1_, speed2_;
  std::vector<double> subcell1_, subcell2_;
};

enum class EulerBoundary { periodic, dirichlet };

/// Conservative variables (rho, rho v, rho e) of the 1D Euler equations.
struct EulerState {
  double rho, mom, energy;
};

[[nodiscard]] EulerState euler_from_primitive(double rho, double v, double p, double gamma);
[[nodiscard]] double euler_pressure(const EulerState& s, double gamma);
[[nodiscard]] double euler_max_speed(const EulerState& s, double gamma);

/// DGSEM for the 1D compressible Euler equations with local Lax-Friedrichs
/// interface fluxes. State layout: node-major, three variables per node.
/// Non-positive density or pressure raises SolutionError.
class Euler1D {
 public:
  static constexpr int kVars = 3;

  Euler1D(Mesh1D mesh, double gamma, EulerBoundary boundary = EulerBoundary::periodic,
          EulerState left_state = {}, EulerState right_state = {});

  void rhs(std::span<const double> u, std::span<double> du) const;

  [[nodiscard]] const Mesh1D& mesh() const noexcept { return mesh_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] std::size_t size() const noexcept { return kVars * mesh_.num_nodes(); }

  /// |v| + c at a node, for CFL control.
  [[nodiscard]] WaveSpeedFunction wavespeed() const;
  /// Integrals of the three conserved variables.
  [[nodiscard]] std::array<double, 3> totals(std::span<const double> u) const;

 private:
  Mesh1D mesh_;
  double gamma_;
  EulerBoundary boundary_;
  EulerState left_, right_;
};

}  // namespace rkctl::dgsem
