#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rkctl/tableau.hpp"

namespace rkctl::spectra {

using LinearOperator = std::function<void(std::span<const double> u, std::span<double> out)>;
using Complex = std::complex<double>;

/// Dense row-major square matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
  [[nodiscard]] double trace() const;
};

/// Relative tolerance of the linearity probe run before assembly.
inline constexpr double kLinearityTolerance = 1e-10;

/// Checks op(a u + b w) == a op(u) + b op(w) on three random pairs.
/// Returns the largest relative defect.
[[nodiscard]] double linearity_defect(const LinearOperator& op, std::size_t n,
                                      std::uint64_t seed = 7);

/// Column j is op(e_j). Throws NotLinearError when the probe fails.
[[nodiscard]] DenseMatrix assemble_operator(const LinearOperator& op, std::size_t n,
                                            std::uint64_t seed = 7);

/// Full spectrum of a real nonsymmetric matrix, sorted by (re, im).
/// Throws NumericalError when the QR iteration does not converge.
[[nodiscard]] std::vector<Complex> eigenvalues(const DenseMatrix& m);

/// Spectral norm estimate by power iteration on M^T M.
[[nodiscard]] double norm2(const DenseMatrix& m);

/// min over unit v of ||M v - lambda v||_2, approximated by a few steps of
/// shifted inverse iteration started from a fixed vector.
[[nodiscard]] double eigen_residual(const DenseMatrix& m, Complex lambda);

/// Largest sigma such that |R(sigma lambda)| <= 1 for every lambda, following
/// the stability region outward from sigma = 0 and refining the first exit to
/// a relative width of 1e-4. Eigenvalues with |lambda| < 1e-12 are ignored.
/// Returns 0 when some eigenvalue leaves the region at |sigma lambda| < 1e-8.
[[nodiscard]] double max_embedding_scale(std::span<const Complex> spectrum,
                                         const ButcherTableau& tab);

/// Eigenvalues with |R(sigma lambda)| > 1 + 1e-12.
[[nodiscard]] std::vector<Complex> outside_region(std::span<const Complex> spectrum,
                                                  const ButcherTableau& tab, double sigma);

struct RegionPoint {
  double re, im;
};

/// Points of the level set |R(z)| = 1 on a uniform nx x ny grid of the box
/// [re_lo, re_hi] x [im_lo, im_hi], located by linear interpolation along grid
/// edges where |R| - 1 changes sign.
[[nodiscard]] std::vector<RegionPoint> stability_boundary(const ButcherTableau& tab,
                                                          double re_lo = -12.0,
                                                          double re_hi = 2.0,
                                                          double im_lo = -10.0,
                                                          double im_hi = 10.0, int nx = 600,
                                                          int ny = 600);

struct SpectrumReport {
  std::string method;
  double effective_stages = 0.0;
  std::vector<Complex> eigenvalues;
  double sigma_star = 0.0;
  /// Largest residual among the inverse-iteration spot checks, relative to norm2.
  double spot_check_residual = 0.0;
  double matrix_norm = 0.0;
};

/// Assemble, solve, scale and spot-check ten eigenvalues picked with `seed`.
[[nodiscard]] SpectrumReport spectrum_report(const LinearOperator& op, std::size_t n,
                                             const ButcherTableau& tab,
                                             std::uint64_t seed = 7, int spot_checks = 10);

/// Largest distance between an eigenvalue and the nearest conjugate of another.
[[nodiscard]] double conjugate_mismatch(std::span<const Complex> spectrum);

}  // namespace rkctl::spectra
