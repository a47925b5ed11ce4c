#include <algorithm>
#include <cmath>
#include <numbers>

#include "rkctl/dgsem.hpp"
#include "rkctl/errors.hpp"

namespace rkctl::dgsem {

namespace {

// Legendre polynomials P_{n-1}(x), P_n(x).
std::pair<double, double> legendre_pair(int n, double x) {
  double p_prev = 1.0, p = x;
  if (n == 0) return {0.0, 1.0};
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = next;
  }
  return {p_prev, p};
}

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 1) throw ContractViolation("ReferenceElement: degree must be >= 1");
  const int n = degree + 1;
  nodes_.assign(static_cast<std::size_t>(n), 0.0);
  weights_.assign(static_cast<std::size_t>(n), 0.0);

  // Newton iteration for the roots of (1 - x^2) P'_p(x), started from the
  // Chebyshev-Gauss-Lobatto points.
  for (int j = 0; j < n; ++j) {
    double x = -std::cos(std::numbers::pi * j / degree);
    if (j == 0 || j == degree) {
      nodes_[static_cast<std::size_t>(j)] = x;
      continue;
    }
    for (int it = 0; it < 100; ++it) {
      const auto [pm1, p] = legendre_pair(degree, x);
      const double dx = (x * p - pm1) / (n * p);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes_[static_cast<std::size_t>(j)] = x;
  }
  for (int j = 0; j < n / 2; ++j) {
    const double sym = 0.5 * (nodes_[static_cast<std::size_t>(degree - j)] -
                              nodes_[static_cast<std::size_t>(j)]);
    nodes_[static_cast<std::size_t>(j)] = -sym;
    nodes_[static_cast<std::size_t>(degree - j)] = sym;
  }
  if (n % 2 == 1) nodes_[static_cast<std::size_t>(degree / 2)] = 0.0;

  for (int j = 0; j < n; ++j) {
    const double p = legendre_pair(degree, nodes_[static_cast<std::size_t>(j)]).second;
    weights_[static_cast<std::size_t>(j)] = 2.0 / (degree * (degree + 1.0) * p * p);
  }

  // Barycentric form of the collocation derivative.
  std::vector<double> bary(static_cast<std::size_t>(n), 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) bary[static_cast<std::size_t>(j)] /= nodes_[j] - nodes_[k];
  d_.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = bary[j] / bary[i] / (nodes_[i] - nodes_[j]);
      d_[static_cast<std::size_t>(i * n + j)] = v;
      diag -= v;
    }
    d_[static_cast<std::size_t>(i * n + i)] = diag;
  }
}

}  // namespace rkctl::dgsem
