#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rkctl/dgsem.hpp"
#include "rkctl/errors.hpp"
#include "rkctl/spectra.hpp"
#include "rkctl/tableau.hpp"

using namespace rkctl;
using namespace rkctl::spectra;

namespace {

// Periodic first-order upwind differences on a uniform grid: a circulant
// matrix with eigenvalues -(a / dx) (1 - exp(-2 pi i k / n)).
LinearOperator upwind(std::size_t n, double a, double dx) {
  return [=](std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = -a / dx * (u[i] - u[(i + n - 1) % n]);
  };
}

std::vector<Complex> upwind_spectrum(std::size_t n, double a, double dx) {
  std::vector<Complex> ev;
  for (std::size_t k = 0; k < n; ++k)
    ev.push_back(-a / dx * (1.0 - std::polar(1.0, -2.0 * std::numbers::pi * k / n)));
  return ev;
}

double nearest(const std::vector<Complex>& set, Complex z) {
  double d = INFINITY;
  for (auto w : set) d = std::min(d, std::abs(w - z));
  return d;
}

}  // namespace

TEST(Assemble, ReproducesExplicitMatrix) {
  const std::vector<double> m{2.0, -1.0, 0.5, 3.0, 0.0, 4.0, -2.0, 1.0, 1.5};
  const LinearOperator op = [&](std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < 3; ++i) {
      out[i] = 0.0;
      for (std::size_t j = 0; j < 3; ++j) out[i] += m[i * 3 + j] * u[j];
    }
  };
  const auto a = assemble_operator(op, 3);
  EXPECT_EQ(a.data, m);
  EXPECT_DOUBLE_EQ(a.trace(), 3.5);
  EXPECT_LT(linearity_defect(op, 3), 1e-14);
}

TEST(Assemble, NonlinearOperatorIsRejected) {
  const LinearOperator sq = [](std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i];
  };
  EXPECT_GT(linearity_defect(sq, 4), kLinearityTolerance);
  EXPECT_THROW((void)assemble_operator(sq, 4), NotLinearError);
  const LinearOperator affine = [](std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + 1.0;
  };
  EXPECT_THROW((void)assemble_operator(affine, 4), NotLinearError);
}

TEST(Eigenvalues, CirculantUpwindSpectrum) {
  const std::size_t n = 40;
  const auto m = assemble_operator(upwind(n, 1.5, 0.1), n);
  const auto ev = eigenvalues(m);
  const auto exact = upwind_spectrum(n, 1.5, 0.1);
  ASSERT_EQ(ev.size(), n);
  for (auto z : exact) EXPECT_LT(nearest(ev, z), 1e-10) << z;
  for (std::size_t i = 1; i < ev.size(); ++i)
    EXPECT_TRUE(ev[i - 1].real() < ev[i].real() ||
                (ev[i - 1].real() == ev[i].real() && ev[i - 1].imag() <= ev[i].imag()));
}

TEST(Eigenvalues, DgAdvectionSpectrumIsDissipativeAndConjugate) {
  const dgsem::Advection1D op(dgsem::Mesh1D(6, 3, 0.0, 1.0), 1.0, 0.2);
  const LinearOperator lin = [&](std::span<const double> u, std::span<double> du) { op.rhs(u, du); };
  const auto m = assemble_operator(lin, op.size());
  const auto ev = eigenvalues(m);
  Complex sum = 0.0;
  for (auto z : ev) {
    EXPECT_LE(z.real(), 1e-10);
    sum += z;
  }
  EXPECT_NEAR(sum.real(), m.trace(), 1e-9 * std::abs(m.trace()));
  EXPECT_NEAR(sum.imag(), 0.0, 1e-9);
  EXPECT_LT(conjugate_mismatch(ev), 1e-9);
  const double nrm = norm2(m);
  for (std::size_t i = 0; i < ev.size(); i += 5) EXPECT_LT(eigen_residual(m, ev[i]) / nrm, 1e-8);
}

TEST(Eigenvalues, NormAndResidualOnDiagonalMatrix) {
  DenseMatrix d(3);
  d(0, 0) = 3.0;
  d(1, 1) = -5.0;
  d(2, 2) = 1.0;
  EXPECT_NEAR(norm2(d), 5.0, 1e-10);
  EXPECT_LT(eigen_residual(d, Complex(-5.0, 0.0)), 1e-12);
  // For a normal matrix the exact minimum is the distance to the spectrum; a
  // few inverse-iteration steps approach it from above.
  for (auto [z, dist] : {std::pair{Complex(2.5, 0.0), 0.5}, std::pair{Complex(1.0, 0.25), 0.25}}) {
    const double r = eigen_residual(d, z);
    EXPECT_GE(r, dist - 1e-12);
    EXPECT_LE(r, 1.01 * dist);
  }
}

TEST(ConjugateMismatch, Definition) {
  const std::vector<Complex> ok{{1.0, 1.0}, {1.0, -1.0}, {2.0, 0.0}};
  EXPECT_NEAR(conjugate_mismatch(ok), 0.0, 1e-15);
  const std::vector<Complex> lone{{1.0, 1.0}};
  EXPECT_NEAR(conjugate_mismatch(lone), 2.0, 1e-15);
}

TEST(EmbeddingScale, RealAxisLimit) {
  const auto bs3 = builtin("BS3_3F");
  const std::vector<Complex> one{{-1.0, 0.0}};
  const double s1 = max_embedding_scale(one, bs3);
  EXPECT_NEAR(s1, 2.5127, 1e-3);
  const std::vector<Complex> two{{-1.0, 0.0}, {-2.0, 0.0}};
  EXPECT_NEAR(max_embedding_scale(two, bs3), 0.5 * s1, 2e-4 * s1);
}

TEST(EmbeddingScale, ImaginaryAxisLimitOfThirdOrderPolynomial) {
  // |R(iy)|^2 = 1 - y^4 / 12 + y^6 / 36 for 1 + z + z^2/2 + z^3/6, so the
  // imaginary-axis limit is sqrt(3).
  const std::vector<Complex> pair{{0.0, 1.0}, {0.0, -1.0}};
  EXPECT_NEAR(max_embedding_scale(pair, builtin("BS3_3F")), std::sqrt(3.0), 1e-3);
}

TEST(EmbeddingScale, UnstableEigenvalueGivesZero) {
  const std::vector<Complex> growing{{0.5, 0.0}, {-1.0, 0.0}};
  EXPECT_EQ(max_embedding_scale(growing, builtin("SSP3_4")), 0.0);
}

TEST(EmbeddingScale, ZeroEigenvalueIsIgnored) {
  const auto tab = builtin("SSP3_4");
  const std::vector<Complex> a{{-1.0, 0.0}}, b{{-1.0, 0.0}, {0.0, 0.0}};
  EXPECT_EQ(max_embedding_scale(a, tab), max_embedding_scale(b, tab));
}

TEST(EmbeddingScale, ScaledSpectrumIsInsideRegion) {
  const auto tab = builtin("SSP3_4");
  const auto spectrum = upwind_spectrum(32, 1.0, 1.0);
  const double s = max_embedding_scale(spectrum, tab);
  ASSERT_GT(s, 0.0);
  EXPECT_TRUE(outside_region(spectrum, tab, s).empty());
  EXPECT_FALSE(outside_region(spectrum, tab, 1.01 * s).empty());
  for (auto z : spectrum) EXPECT_LE(std::abs(stability_function(tab, s * z)), 1.0 + 1e-9);
}

TEST(StabilityBoundary, PointsLieOnUnitLevelSet) {
  const auto tab = builtin("BS3_3F");
  const auto pts = stability_boundary(tab, -4.0, 1.0, -3.0, 3.0, 200, 200);
  ASSERT_GT(pts.size(), 100u);
  bool near_real_limit = false;
  for (const auto& p : pts) {
    EXPECT_NEAR(std::abs(stability_function(tab, Complex(p.re, p.im))), 1.0, 2e-2);
    if (std::abs(p.im) < 0.05 && std::abs(p.re + 2.5127) < 0.05) near_real_limit = true;
  }
  EXPECT_TRUE(near_real_limit);
}

TEST(Report, UpwindOperator) {
  const std::size_t n = 24;
  const auto tab = builtin("BS3_3F");
  const auto r = spectrum_report(upwind(n, 1.0, 1.0), n, tab);
  EXPECT_EQ(r.method, "BS3_3F");
  EXPECT_EQ(r.effective_stages, 3.0);
  EXPECT_EQ(r.eigenvalues.size(), n);
  EXPECT_LT(r.spot_check_residual, 1e-8);
  EXPECT_NEAR(r.matrix_norm, 2.0, 1e-6);
  EXPECT_NEAR(r.sigma_star, max_embedding_scale(upwind_spectrum(n, 1.0, 1.0), tab),
              1e-3 * r.sigma_star);
}
