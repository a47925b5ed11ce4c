#include <cmath>
#include <vector>

#include "rkctl/dgsem.hpp"
#include "rkctl/errors.hpp"

namespace rkctl::dgsem {

namespace {

// Local Lax-Friedrichs flux for a linear flux s * u; upwind for advection.
inline double llf(double ul, double ur, double s) noexcept {
  return 0.5 * s * (ul + ur) - 0.5 * std::abs(s) * (ur - ul);
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("blending alpha must lie in [0,1]");
}

template <class Dg, class Fv>
void blend(double alpha, std::span<const double> u, std::span<double> du, const Dg& dg,
           const Fv& fv) {
  if (alpha == 0.0) {
    dg(u, du);
    return;
  }
  if (alpha == 1.0) {
    fv(u, du);
    return;
  }
  std::vector<double> tmp(du.size());
  dg(u, du);
  fv(u, std::span<double>(tmp));
  for (std::size_t k = 0; k < du.size(); ++k) du[k] = (1.0 - alpha) * du[k] + alpha * tmp[k];
}

}  // namespace

Advection1D::Advection1D(Mesh1D mesh, double velocity, double alpha)
    : mesh_(std::move(mesh)), a_(velocity), alpha_(alpha) {
  check_alpha(alpha);
}

double Advection1D::interface_flux(double ul, double ur) const noexcept {
  return llf(ul, ur, a_);
}

void Advection1D::dg_rhs(std::span<const double> u, std::span<double> du) const {
  const int n = mesh_.ref.num_nodes(), p = n - 1, ne = mesh_.elements;
  const double scale = 2.0 / mesh_.h;
  const auto& w = mesh_.ref.weights();
  for (int e = 0; e < ne; ++e) {
    const auto* ue = u.data() + e * n;
    auto* de = du.data() + e * n;
    const int el = (e + ne - 1) % ne, er = (e + 1) % ne;
    const double f_left = interface_flux(u[static_cast<std::size_t>(el * n + p)], ue[0]);
    const double f_right = interface_flux(ue[p], u[static_cast<std::size_t>(er * n)]);
    for (int i = 0; i < n; ++i) {
      double vol = 0.0;
      for (int m = 0; m < n; ++m) vol += mesh_.ref.derivative(i, m) * a_ * ue[m];
      de[i] = vol;
    }
    de[p] += (f_right - a_ * ue[p]) / w[static_cast<std::size_t>(p)];
    de[0] -= (f_left - a_ * ue[0]) / w[0];
    for (int i = 0; i < n; ++i) de[i] *= -scale;
  }
}

void Advection1D::fv_rhs(std::span<const double> u, std::span<double> du) const {
  const int n = mesh_.ref.num_nodes(), p = n - 1, ne = mesh_.elements;
  const double scale = 2.0 / mesh_.h;
  const auto& w = mesh_.ref.weights();
  std::vector<double> flux(static_cast<std::size_t>(n + 1));
  for (int e = 0; e < ne; ++e) {
    const auto* ue = u.data() + e * n;
    auto* de = du.data() + e * n;
    const int el = (e + ne - 1) % ne, er = (e + 1) % ne;
    flux[0] = interface_flux(u[static_cast<std::size_t>(el * n + p)], ue[0]);
    flux[static_cast<std::size_t>(n)] = interface_flux(ue[p], u[static_cast<std::size_t>(er * n)]);
    for (int i = 1; i < n; ++i) flux[static_cast<std::size_t>(i)] = interface_flux(ue[i - 1], ue[i]);
    for (int i = 0; i < n; ++i)
      de[i] = -scale * (flux[static_cast<std::size_t>(i + 1)] - flux[static_cast<std::size_t>(i)]) /
              w[static_cast<std::size_t>(i)];
  }
}

void Advection1D::rhs(std::span<const double> u, std::span<double> du) const {
  if (u.size() != size() || du.size() != size())
    throw ContractViolation("Advection1D: state has the wrong length");
  blend(
      alpha_, u, du, [this](auto a, auto b) { dg_rhs(a, b); },
      [this](auto a, auto b) { fv_rhs(a, b); });
}

Advection2D::Advection2D(Mesh2D mesh, std::array<double, 2> velocity, double alpha)
    : mesh_(std::move(mesh)), a_(velocity), alpha_(alpha) {
  check_alpha(alpha);
  const auto total = mesh_.num_nodes();
  speed1_.resize(total);
  speed2_.resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    speed1_[k] = mesh_.ja1[2 * k] * a_[0] + mesh_.ja1[2 * k + 1] * a_[1];
    speed2_[k] = mesh_.ja2[2 * k] * a_[0] + mesh_.ja2[2 * k + 1] * a_[1];
  }

  const int n = mesh_.nodes_per_dir(), ne = mesh_.elements;
  const auto& w = mesh_.ref.weights();
  const auto lines = static_cast<std::size_t>(ne) * ne * n;
  subcell1_.assign(lines * (n + 1), 0.0);
  subcell2_.assign(lines * (n + 1), 0.0);
  for (int ey = 0; ey < ne; ++ey)
    for (int ex = 0; ex < ne; ++ex) {
      const auto e = static_cast<std::size_t>(ey * ne + ex);
      for (int line = 0; line < n; ++line) {
        double* s1 = subcell1_.data() + (e * n + line) * (n + 1);
        double* s2 = subcell2_.data() + (e * n + line) * (n + 1);
        s1[0] = speed1_[mesh_.node_index(ex, ey, 0, line)];
        s2[0] = speed2_[mesh_.node_index(ex, ey, line, 0)];
        for (int i = 0; i < n; ++i) {
          double d1 = 0.0, d2 = 0.0;
          for (int m = 0; m < n; ++m) {
            d1 += mesh_.ref.derivative(i, m) * speed1_[mesh_.node_index(ex, ey, m, line)];
            d2 += mesh_.ref.derivative(i, m) * speed2_[mesh_.node_index(ex, ey, line, m)];
          }
          s1[i + 1] = s1[i] + w[static_cast<std::size_t>(i)] * d1;
          s2[i + 1] = s2[i] + w[static_cast<std::size_t>(i)] * d2;
        }
      }
    }
}

void Advection2D::dg_rhs(std::span<const double> u, std::span<double> du) const {
  const int n = mesh_.nodes_per_dir(), p = n - 1, ne = mesh_.elements;
  const auto& w = mesh_.ref.weights();
  for (int ey = 0; ey < ne; ++ey)
    for (int ex = 0; ex < ne; ++ex) {
      const int exl = (ex + ne - 1) % ne, exr = (ex + 1) % ne;
      const int eyl = (ey + ne - 1) % ne, eyr = (ey + 1) % ne;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          double vol = 0.0;
          for (int m = 0; m < n; ++m) {
            const auto kx = mesh_.node_index(ex, ey, m, j);
            const auto ky = mesh_.node_index(ex, ey, i, m);
            vol += mesh_.ref.derivative(i, m) * speed1_[kx] * u[kx];
            vol += mesh_.ref.derivative(j, m) * speed2_[ky] * u[ky];
          }
          du[mesh_.node_index(ex, ey, i, j)] = vol;
        }
      // xi faces
      for (int j = 0; j < n; ++j) {
        const auto k0 = mesh_.node_index(ex, ey, 0, j);
        const auto kp = mesh_.node_index(ex, ey, p, j);
        const auto kl = mesh_.node_index(exl, ey, p, j);
        const auto kr = mesh_.node_index(exr, ey, 0, j);
        const double sl = 0.5 * (speed1_[kl] + speed1_[k0]);
        const double sr = 0.5 * (speed1_[kp] + speed1_[kr]);
        du[k0] -= (llf(u[kl], u[k0], sl) - speed1_[k0] * u[k0]) / w[0];
        du[kp] += (llf(u[kp], u[kr], sr) - speed1_[kp] * u[kp]) / w[static_cast<std::size_t>(p)];
      }
      // eta faces
      for (int i = 0; i < n; ++i) {
        const auto k0 = mesh_.node_index(ex, ey, i, 0);
        const auto kp = mesh_.node_index(ex, ey, i, p);
        const auto kl = mesh_.node_index(ex, eyl, i, p);
        const auto kr = mesh_.node_index(ex, eyr, i, 0);
        const double sl = 0.5 * (speed2_[kl] + speed2_[k0]);
        const double sr = 0.5 * (speed2_[kp] + speed2_[kr]);
        du[k0] -= (llf(u[kl], u[k0], sl) - speed2_[k0] * u[k0]) / w[0];
        du[kp] += (llf(u[kp], u[kr], sr) - speed2_[kp] * u[kp]) / w[static_cast<std::size_t>(p)];
      }
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const auto k = mesh_.node_index(ex, ey, i, j);
          du[k] = -du[k] / mesh_.jacobian[k];
        }
    }
}

void Advection2D::fv_rhs(std::span<const double> u, std::span<double> du) const {
  const int n = mesh_.nodes_per_dir(), p = n - 1, ne = mesh_.elements;
  const auto& w = mesh_.ref.weights();
  std::vector<double> flux(static_cast<std::size_t>(n + 1));
  for (std::size_t k = 0; k < du.size(); ++k) du[k] = 0.0;
  for (int ey = 0; ey < ne; ++ey)
    for (int ex = 0; ex < ne; ++ex) {
      const auto e = static_cast<std::size_t>(ey * ne + ex);
      const int exl = (ex + ne - 1) % ne, exr = (ex + 1) % ne;
      const int eyl = (ey + ne - 1) % ne, eyr = (ey + 1) % ne;
      for (int line = 0; line < n; ++line) {
        // xi direction along row `line`
        {
          const double* sig = subcell1_.data() + (e * n + line) * (n + 1);
          const auto k0 = mesh_.node_index(ex, ey, 0, line);
          const auto kp = mesh_.node_index(ex, ey, p, line);
          const auto kl = mesh_.node_index(exl, ey, p, line);
          const auto kr = mesh_.node_index(exr, ey, 0, line);
          flux[0] = llf(u[kl], u[k0], 0.5 * (speed1_[kl] + speed1_[k0]));
          flux[static_cast<std::size_t>(n)] = llf(u[kp], u[kr], 0.5 * (speed1_[kp] + speed1_[kr]));
          for (int i = 1; i < n; ++i)
            flux[static_cast<std::size_t>(i)] =
                llf(u[mesh_.node_index(ex, ey, i - 1, line)], u[mesh_.node_index(ex, ey, i, line)],
                    sig[i]);
          for (int i = 0; i < n; ++i)
            du[mesh_.node_index(ex, ey, i, line)] +=
                (flux[static_cast<std::size_t>(i + 1)] - flux[static_cast<std::size_t>(i)]) /
                w[static_cast<std::size_t>(i)];
        }
        // eta direction along column `line`
        {
          const double* sig = subcell2_.data() + (e * n + line) * (n + 1);
          const auto k0 = mesh_.node_index(ex, ey, line, 0);
          const auto kp = mesh_.node_index(ex, ey, line, p);
          const auto kl = mesh_.node_index(ex, eyl, line, p);
          const auto kr = mesh_.node_index(ex, eyr, line, 0);
          flux[0] = llf(u[kl], u[k0], 0.5 * (speed2_[kl] + speed2_[k0]));
          flux[static_cast<std::size_t>(n)] = llf(u[kp], u[kr], 0.5 * (speed2_[kp] + speed2_[kr]));
          for (int j = 1; j < n; ++j)
            flux[static_cast<std::size_t>(j)] =
                llf(u[mesh_.node_index(ex, ey, line, j - 1)], u[mesh_.node_index(ex, ey, line, j)],
                    sig[j]);
          for (int j = 0; j < n; ++j)
            du[mesh_.node_index(ex, ey, line, j)] +=
                (flux[static_cast<std::size_t>(j + 1)] - flux[static_cast<std::size_t>(j)]) /
                w[static_cast<std::size_t>(j)];
        }
      }
    }
  for (std::size_t k = 0; k < du.size(); ++k) du[k] = -du[k] / mesh_.jacobian[k];
}

void Advection2D::rhs(std::span<const double> u, std::span<double> du) const {
  if (u.size() != size() || du.size() != size())
    throw ContractViolation("Advection2D: state has the wrong length");
  blend(
      alpha_, u, du, [this](auto a, auto b) { dg_rhs(a, b); },
      [this](auto a, auto b) { fv_rhs(a, b); });
}

}  // namespace rkctl::dgsem
