#include <cmath>
#include <numbers>

#include "rkctl/dgsem.hpp"
#include "rkctl/errors.hpp"

namespace rkctl::dgsem {

Mesh1D::Mesh1D(int elements_, int degree, double left_, double right_)
    : elements(elements_), ref(degree), left(left_), right(right_) {
  if (elements < 1) throw ContractViolation("Mesh1D: need at least one element");
  if (!(right > left)) throw ContractViolation("Mesh1D: empty interval");
  h = (right - left) / elements;
  const int n = ref.num_nodes();
  x.resize(static_cast<std::size_t>(elements * n));
  for (int e = 0; e < elements; ++e)
    for (int i = 0; i < n; ++i)
      x[static_cast<std::size_t>(e * n + i)] =
          left + h * (e + 0.5 * (ref.nodes()[static_cast<std::size_t>(i)] + 1.0));
}

MeshMetrics Mesh1D::metrics() const {
  MeshMetrics m;
  m.dim = 1;
  m.degree = ref.degree();
  m.jacobian.assign(num_nodes(), 0.5 * h);
  m.contravariant.assign(num_nodes(), 1.0);
  return m;
}

std::vector<double> Mesh1D::mass() const {
  const int n = ref.num_nodes();
  std::vector<double> w(num_nodes());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = 0.5 * h * ref.weights()[k % static_cast<std::size_t>(n)];
  return w;
}

std::array<double, 2> curved_mapping_2d(double xi, double eta, const WarpParameters& p) {
  constexpr double pi = std::numbers::pi;
  const double ax = p.amplitude * p.length_x / 8.0;
  const double ay = p.amplitude * p.length_y / 8.0;
  const double y = eta + ay * std::cos(3.0 * pi * (xi - p.center_x) / p.length_x) *
                             std::cos(pi * (eta - p.center_y) / p.length_y);
  const double x = xi + ax * std::cos(pi * (xi - p.center_x) / p.length_x) *
                            std::cos(4.0 * pi * (y - p.center_y) / p.length_y);
  return {x, y};
}

Mesh2D::Mesh2D(int elements_, int degree) : elements(elements_), ref(degree) {
  if (elements < 1) throw ContractViolation("Mesh2D: need at least one element");
}

template <class Map>
void Mesh2D::build(const Map& map, double lo_x, double lo_y, double len_x, double len_y) {
  const int n = nodes_per_dir();
  const std::size_t total = static_cast<std::size_t>(elements) * elements * n * n;
  x.resize(total);
  y.resize(total);
  jacobian.resize(total);
  ja1.resize(2 * total);
  ja2.resize(2 * total);
  const double hx = len_x / elements, hy = len_y / elements;
  const auto& r = ref.nodes();

  for (int ey = 0; ey < elements; ++ey)
    for (int ex = 0; ex < elements; ++ex)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double xi = lo_x + hx * (ex + 0.5 * (r[static_cast<std::size_t>(i)] + 1.0));
          const double eta = lo_y + hy * (ey + 0.5 * (r[static_cast<std::size_t>(j)] + 1.0));
          const auto [px, py] = map(xi, eta);
          const auto k = node_index(ex, ey, i, j);
          x[k] = px;
          y[k] = py;
        }

  for (int ey = 0; ey < elements; ++ey)
    for (int ex = 0; ex < elements; ++ex)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          double x_xi = 0, x_eta = 0, y_xi = 0, y_eta = 0;
          for (int m = 0; m < n; ++m) {
            const auto kxi = node_index(ex, ey, m, j);
            const auto keta = node_index(ex, ey, i, m);
            x_xi += ref.derivative(i, m) * x[kxi];
            y_xi += ref.derivative(i, m) * y[kxi];
            x_eta += ref.derivative(j, m) * x[keta];
            y_eta += ref.derivative(j, m) * y[keta];
          }
          const auto k = node_index(ex, ey, i, j);
          jacobian[k] = x_xi * y_eta - x_eta * y_xi;
          ja1[2 * k] = y_eta;
          ja1[2 * k + 1] = -x_eta;
          ja2[2 * k] = -y_xi;
          ja2[2 * k + 1] = x_xi;
        }
}

Mesh2D Mesh2D::cartesian(int elements, int degree, double lo, double hi) {
  if (!(hi > lo)) throw ContractViolation("Mesh2D: empty domain");
  Mesh2D mesh(elements, degree);
  mesh.build([](double xi, double eta) { return std::array<double, 2>{xi, eta}; }, lo, lo,
             hi - lo, hi - lo);
  return mesh;
}

Mesh2D Mesh2D::warped(int elements, int degree, const WarpParameters& params) {
  Mesh2D mesh(elements, degree);
  mesh.build([&](double xi, double eta) { return curved_mapping_2d(xi, eta, params); },
             params.center_x - 0.5 * params.length_x, params.center_y - 0.5 * params.length_y,
             params.length_x, params.length_y);
  return mesh;
}

MeshMetrics Mesh2D::metrics() const {
  MeshMetrics m;
  m.dim = 2;
  m.degree = ref.degree();
  m.jacobian = jacobian;
  m.contravariant.resize(4 * num_nodes());
  for (std::size_t k = 0; k < num_nodes(); ++k) {
    m.contravariant[4 * k + 0] = ja1[2 * k];
    m.contravariant[4 * k + 1] = ja1[2 * k + 1];
    m.contravariant[4 * k + 2] = ja2[2 * k];
    m.contravariant[4 * k + 3] = ja2[2 * k + 1];
  }
  return m;
}

std::vector<double> Mesh2D::mass() const {
  const int n = nodes_per_dir();
  std::vector<double> w(num_nodes());
  for (int ey = 0; ey < elements; ++ey)
    for (int ex = 0; ex < elements; ++ex)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const auto k = node_index(ex, ey, i, j);
          w[k] = jacobian[k] * ref.weights()[static_cast<std::size_t>(i)] *
                 ref.weights()[static_cast<std::size_t>(j)];
        }
  return w;
}

}  // namespace rkctl::dgsem
