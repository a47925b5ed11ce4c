#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "rkctl/errors.hpp"
#include "rkctl/exner.hpp"

using namespace rkctl;
using namespace rkctl::exner;

namespace {

// Eigenvalues of the 4x4 flux Jacobian from a dense solver, ascending.
std::array<double, 4> jacobian_spectrum(const SweExnerState& s, const SweExnerParams& p,
                                        double* max_imag = nullptr) {
  const auto j = flux_jacobian_x(s, p);
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j[r][c];
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(m, false);
  std::array<double, 4> out{};
  double im = 0.0;
  for (int i = 0; i < 4; ++i) {
    out[i] = solver.eigenvalues()[i].real();
    im = std::max(im, std::abs(solver.eigenvalues()[i].imag()));
  }
  if (max_imag) *max_imag = im;
  std::sort(out.begin(), out.end());
  return out;
}

std::array<double, 4> roots_with_velocity(const SweExnerState& s, const SweExnerParams& p) {
  const auto r = characteristic_roots(s, p);
  std::array<double, 4> out{r[0], r[1], r[2], s.v1()};
  std::sort(out.begin(), out.end());
  return out;
}

SweExnerState dune_state() { return {10.0, 10.0, 0.0, 0.0}; }

}  // namespace

TEST(Params, DefaultsAndValidation) {
  const SweExnerParams p;
  EXPECT_EQ(p.g, 9.8);
  EXPECT_NEAR(p.xi(), 1.0 / 0.6, 1e-15);
  EXPECT_EQ(p.jacobian_42, Jacobian42::squared);
  EXPECT_NO_THROW(p.validate());
  auto bad = p;
  bad.sigma = 1.0;
  EXPECT_THROW(bad.validate(), ContractViolation);
  bad = p;
  bad.m_exp = 2;
  EXPECT_THROW(bad.validate(), ContractViolation);
  EXPECT_EQ(parse_jacobian42("as_printed"), Jacobian42::as_printed);
  EXPECT_THROW((void)parse_jacobian42("cubed"), ConfigError);
}

TEST(Grass, DischargeIsCubicInSpeed) {
  const SweExnerParams p;
  const auto q = grass_discharge({3.0, 4.0}, p);
  EXPECT_NEAR(q[0], 0.001 * 3.0 * 25.0, 1e-15);
  EXPECT_NEAR(q[1], 0.001 * 4.0 * 25.0, 1e-15);
  const auto q2 = grass_discharge({6.0, 8.0}, p);
  EXPECT_NEAR(q2[0], 8.0 * q[0], 1e-13);
}

TEST(Cubic, KnownRoots) {
  // (x - 1)(x + 2)(x - 3) = x^3 - 2x^2 - 5x + 6
  const auto r = solve_real_cubic(-2.0, -5.0, 6.0);
  EXPECT_NEAR(r[0], -2.0, 1e-14);
  EXPECT_NEAR(r[1], 1.0, 1e-14);
  EXPECT_NEAR(r[2], 3.0, 1e-14);
  const auto triple = solve_real_cubic(-3.0, 3.0, -1.0);
  for (double x : triple) EXPECT_NEAR(x, 1.0, 1e-5);
  const auto dbl = solve_real_cubic(0.0, -3.0, 2.0);  // (x - 1)^2 (x + 2)
  EXPECT_NEAR(dbl[0], -2.0, 1e-12);
  EXPECT_NEAR(dbl[1], 1.0, 1e-7);
  EXPECT_NEAR(dbl[2], 1.0, 1e-7);
}

TEST(Cubic, ComplexPairIsHyperbolicityLoss) {
  EXPECT_THROW((void)solve_real_cubic(0.0, 1.0, 0.0), HyperbolicityLossError);
  EXPECT_THROW((void)solve_real_cubic(0.0, 0.0, 1.0), HyperbolicityLossError);
}

TEST(Characteristic, NoSedimentClosedForm) {
  SweExnerParams p;
  p.a_g = 0.0;
  const SweExnerState s{2.0, 3.0, -1.0, 0.0};
  const double c = std::sqrt(p.g * 2.0);
  const auto r = characteristic_roots(s, p);
  EXPECT_NEAR(r[0], 1.5 - c, 1e-10);
  EXPECT_NEAR(r[1], 0.0, 1e-10);
  EXPECT_NEAR(r[2], 1.5 + c, 1e-10);
  const auto spectrum = jacobian_spectrum(s, p);
  const std::array<double, 4> expect{1.5 - c, 0.0, 1.5, 1.5 + c};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(spectrum[i], expect[i], 1e-10);
}

TEST(Characteristic, DuneStateWaveSpeed) {
  const SweExnerParams p;
  const auto s = dune_state();
  const double gh = std::sqrt(98.0);
  const double speed = max_wave_speed(s, p);
  EXPECT_GT(speed, gh - 1.0);
  EXPECT_NEAR(speed, 1.0 + gh, 0.05);
  const auto spectrum = jacobian_spectrum(s, p);
  EXPECT_NEAR(speed, std::max(std::abs(spectrum.front()), std::abs(spectrum.back())), 1e-10);
}

TEST(Characteristic, MatchesDenseEigensolverOnRandomStates) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logh(std::log(0.1), std::log(100.0)), vel(-10.0, 10.0),
      ag(0.0, 0.01);
  SweExnerParams p;
  int checked = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    p.a_g = ag(rng);
    const double h = std::exp(logh(rng));
    const double v1 = vel(rng), v2 = vel(rng);
    if (v1 * v1 + v2 * v2 > 100.0) continue;
    const SweExnerState s{h, h * v1, h * v2, 0.0};
    double imag = 0.0;
    const auto oracle = jacobian_spectrum(s, p, &imag);
    if (imag > 1e-9) {
      EXPECT_THROW((void)characteristic_roots(s, p), HyperbolicityLossError);
      continue;
    }
    const auto c = characteristic_coefficients(s, p);
    const auto r = characteristic_roots(s, p);
    const double scale = std::max({1.0, std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
    for (double x : r) ASSERT_LE(std::abs(((x + c[0]) * x + c[1]) * x + c[2]), 1e-9 * scale);
    const auto mine = roots_with_velocity(s, p);
    for (int i = 0; i < 4; ++i)
      ASSERT_NEAR(mine[i], oracle[i], 1e-8 * std::max(1.0, std::abs(oracle[i])))
          << "h=" << h << " v=(" << v1 << "," << v2 << ") ag=" << p.a_g;
    ++checked;
  }
  EXPECT_GT(checked, 15000);
}

TEST(Characteristic, YDirectionSwapsVelocities) {
  const SweExnerParams p;
  const SweExnerState s{3.0, 1.5, -4.5, 0.2};
  const SweExnerState swapped{3.0, -4.5, 1.5, 0.2};
  const auto ry = characteristic_roots(s, p, Direction::y);
  const auto rx = characteristic_roots(swapped, p, Direction::x);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(ry[i], rx[i]);
  EXPECT_DOUBLE_EQ(max_wave_speed(s, p, Direction::y), max_wave_speed(swapped, p, Direction::x));
}

TEST(Jacobian, AsPrintedEntryDisagreesWithCubic) {
  SweExnerParams squared, printed;
  printed.jacobian_42 = Jacobian42::as_printed;
  squared.a_g = printed.a_g = 0.01;
  // With v2 = 0 both forms coincide.
  const SweExnerState flat{2.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(flux_jacobian_x(flat, squared), flux_jacobian_x(flat, printed));
  // With v2 = 3 only the squared form has the cubic roots in its spectrum.
  const SweExnerState s{2.0, 2.0, 6.0, 0.0};
  const auto want = roots_with_velocity(s, squared);
  const auto a = jacobian_spectrum(s, squared);
  const auto b = jacobian_spectrum(s, printed);
  double da = 0.0, db = 0.0;
  for (int i = 0; i < 4; ++i) {
    da = std::max(da, std::abs(a[i] - want[i]));
    db = std::max(db, std::abs(b[i] - want[i]));
  }
  EXPECT_LT(da, 1e-10);
  EXPECT_GT(db, 1e-4);
}

TEST(Froude, DuneState) {
  const SweExnerParams p;
  EXPECT_NEAR(froude(dune_state(), p), 1.0 / std::sqrt(98.0), 1e-15);
  EXPECT_NEAR(froude(dune_state(), p), 0.1010, 1e-3);
  EXPECT_THROW((void)froude({0.0, 0.0, 0.0, 0.0}, p), DomainError);
  EXPECT_THROW((void)flux_jacobian_x({-1.0, 0.0, 0.0, 0.0}, p), DomainError);
}
