#include "rkctl/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rkctl/errors.hpp"

namespace rkctl::spectra {

namespace {

constexpr double kStabilitySlack = 1e-12;
constexpr double kSkipMagnitude = 1e-12;
constexpr double kImmediateExit = 1e-8;

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
    const DenseMatrix& m) {
  return {m.data.data(), static_cast<Eigen::Index>(m.n), static_cast<Eigen::Index>(m.n)};
}

bool stable(const std::vector<double>& poly, Complex z) {
  return std::abs(evaluate_polynomial(poly, z)) <= 1.0 + kStabilitySlack;
}

// First sigma > 0 at which sigma * lambda leaves the stability region, or 0
// when |sigma lambda| < kImmediateExit there.
double first_exit(const std::vector<double>& poly, Complex lambda) {
  const double step = 0.005 / std::abs(lambda);
  double lo = 0.0, hi = step;
  while (stable(poly, hi * lambda)) {
    lo = hi;
    hi += step;
  }
  if (lo == 0.0) {
    // Resolve very small exits before declaring the eigenvalue unstable.
    double probe = step;
    for (int k = 0; k < 40 && !stable(poly, probe * lambda); ++k) probe *= 0.5;
    if (!stable(poly, probe * lambda)) return 0.0;
    lo = probe;
    hi = 2.0 * probe;
    while (stable(poly, hi * lambda)) {
      lo = hi;
      hi *= 2.0;
    }
  }
  while (hi - lo > 1e-5 * lo) {
    const double mid = 0.5 * (lo + hi);
    (stable(poly, mid * lambda) ? lo : hi) = mid;
  }
  // An exit this close to the origin only reflects the stability slack.
  return lo * std::abs(lambda) < kImmediateExit ? 0.0 : lo;
}

}  // namespace

double DenseMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double linearity_defect(const LinearOperator& op, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(n), w(n), mix(n), fu(n), fw(n), fmix(n);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = dist(rng);
      w[i] = dist(rng);
    }
    const double a = dist(rng), b = dist(rng);
    for (std::size_t i = 0; i < n; ++i) mix[i] = a * u[i] + b * w[i];
    op(u, fu);
    op(w, fw);
    op(mix, fmix);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double expect = a * fu[i] + b * fw[i];
      diff = std::max(diff, std::abs(fmix[i] - expect));
      scale = std::max({scale, std::abs(a * fu[i]), std::abs(b * fw[i]), std::abs(fmix[i])});
    }
    worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
  }
  return worst;
}

DenseMatrix assemble_operator(const LinearOperator& op, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ContractViolation("assemble_operator: empty operator");
  const double defect = linearity_defect(op, n, seed);
  if (!(defect <= kLinearityTolerance))
    throw NotLinearError("assemble_operator: linearity probe defect " + std::to_string(defect));
  DenseMatrix m(n);
  std::vector<double> e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return m;
}

std::vector<Complex> eigenvalues(const DenseMatrix& m) {
  if (m.n == 0) return {};
  if (m.n > 4096) throw ContractViolation("eigenvalues: matrix larger than 4096");
  Eigen::MatrixXd a = view(m);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalues: QR iteration did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<Complex> out(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) out[static_cast<std::size_t>(i)] = ev[i];
  std::sort(out.begin(), out.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

double norm2(const DenseMatrix& m) {
  if (m.n == 0) return 0.0;
  const auto a = view(m);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m.n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += 1e-3 * static_cast<double>(i % 7);
  v.normalize();
  double sigma2 = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (std::abs(next - sigma2) <= 1e-12 * next) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return std::sqrt(sigma2);
}

double eigen_residual(const DenseMatrix& m, Complex lambda) {
  const auto n = static_cast<Eigen::Index>(m.n);
  const Eigen::MatrixXcd a = view(m).cast<Complex>();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const Complex shift = lambda + Complex(1e-10 * scale, 1e-10 * scale);
  Eigen::MatrixXcd shifted = a;
  shifted.diagonal().array() -= shift;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);

  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = Complex(1.0 + 0.1 * std::sin(1.0 + i), 0.1 * std::cos(2.0 * i));
  v.normalize();
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 4; ++it) {
    Eigen::VectorXcd x = lu.solve(v);
    const double nx = x.norm();
    if (!std::isfinite(nx) || nx == 0.0) break;
    v = x / nx;
    best = std::min(best, (a * v - lambda * v).norm());
  }
  return best;
}

double max_embedding_scale(std::span<const Complex> spectrum, const ButcherTableau& tab) {
  if (spectrum.empty()) throw ContractViolation("max_embedding_scale: empty spectrum");
  const auto poly = stability_polynomial(tab);
  double sigma = std::numeric_limits<double>::infinity();
  for (const Complex& lambda : spectrum) {
    if (std::abs(lambda) < kSkipMagnitude) continue;
    sigma = std::min(sigma, first_exit(poly, lambda));
    if (sigma == 0.0) return 0.0;
  }
  if (!std::isfinite(sigma)) throw ContractViolation("max_embedding_scale: spectrum is all zero");
  return sigma;
}

std::vector<Complex> outside_region(std::span<const Complex> spectrum, const ButcherTableau& tab,
                                    double sigma) {
  const auto poly = stability_polynomial(tab);
  std::vector<Complex> out;
  for (const Complex& lambda : spectrum)
    if (!stable(poly, sigma * lambda)) out.push_back(lambda);
  return out;
}

std::vector<RegionPoint> stability_boundary(const ButcherTableau& tab, double re_lo, double re_hi,
                                            double im_lo, double im_hi, int nx, int ny) {
  if (nx < 2 || ny < 2) throw ContractViolation("stability_boundary: grid too small");
  const auto poly = stability_polynomial(tab);
  const double dx = (re_hi - re_lo) / (nx - 1), dy = (im_hi - im_lo) / (ny - 1);
  std::vector<double> g(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      g[static_cast<std::size_t>(j * nx + i)] =
          std::abs(evaluate_polynomial(poly, {re_lo + i * dx, im_lo + j * dy})) - 1.0;
  std::vector<RegionPoint> pts;
  auto edge = [&](int i0, int j0, int i1, int j1) {
    const double a = g[static_cast<std::size_t>(j0 * nx + i0)];
    const double b = g[static_cast<std::size_t>(j1 * nx + i1)];
    if ((a <= 0.0) == (b <= 0.0)) return;
    const double s = a / (a - b);
    pts.push_back({re_lo + (i0 + s * (i1 - i0)) * dx, im_lo + (j0 + s * (j1 - j0)) * dy});
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) edge(i, j, i + 1, j);
      if (j + 1 < ny) edge(i, j, i, j + 1);
    }
  return pts;
}

SpectrumReport spectrum_report(const LinearOperator& op, std::size_t n, const ButcherTableau& tab,
                               std::uint64_t seed, int spot_checks) {
  SpectrumReport r;
  r.method = tab.name();
  r.effective_stages = effective_stage_count(tab);
  const DenseMatrix m = assemble_operator(op, n, seed);
  r.eigenvalues = eigenvalues(m);
  r.sigma_star = max_embedding_scale(r.eigenvalues, tab);
  r.matrix_norm = norm2(m);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, r.eigenvalues.size() - 1);
  for (int k = 0; k < spot_checks; ++k) {
    const Complex lambda = r.eigenvalues[pick(rng)];
    const double res = eigen_residual(m, lambda) / std::max(r.matrix_norm, 1e-300);
    r.spot_check_residual = std::max(r.spot_check_residual, res);
  }
  return r;
}

double conjugate_mismatch(std::span<const Complex> spectrum) {
  double worst = 0.0;
  for (const Complex& lambda : spectrum) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& mu : spectrum) best = std::min(best, std::abs(std::conj(lambda) - mu));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace rkctl::spectra
