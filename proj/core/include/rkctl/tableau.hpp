#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rkctl {

/// Explicit Runge-Kutta pair with an embedded error estimator.
///
/// The embedded weights carry one more entry than the main weights; a
/// non-zero last entry means the estimator uses f(t_{n+1}, u^{n+1}) and the
/// pair is first-same-as-last (FSAL). Instances are immutable once built.
class ButcherTableau {
 public:
  /// Builds a tableau and checks its shape: `a` is s x s and strictly lower
  /// triangular, `b`/`c` have length s, `b_hat` has length s or s+1 (a
  /// missing last entry is zero). Consistency conditions such as sum(b) == 1
  /// are not enforced here; see check_integrity() and validate_order().
  static ButcherTableau create(std::string name,
                               const std::vector<std::vector<double>>& a,
                               std::vector<double> b, std::vector<double> b_hat,
                               std::vector<double> c, int order_q,
                               int order_q_hat);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int stages() const noexcept { return stages_; }
  [[nodiscard]] double a(int i, int j) const noexcept {
    return a_[static_cast<std::size_t>(i * stages_ + j)];
  }
  [[nodiscard]] const std::vector<double>& b() const noexcept { return b_; }
  [[nodiscard]] const std::vector<double>& b_hat() const noexcept {
    return b_hat_;
  }
  [[nodiscard]] const std::vector<double>& c() const noexcept { return c_; }
  [[nodiscard]] int order_q() const noexcept { return order_q_; }
  [[nodiscard]] int order_q_hat() const noexcept { return order_q_hat_; }
  [[nodiscard]] bool fsal() const noexcept { return fsal_; }

 private:
  ButcherTableau() = default;

  std::string name_;
  int stages_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> b_hat_;
  std::vector<double> c_;
  int order_q_ = 0;
  int order_q_hat_ = 0;
  bool fsal_ = false;
};

/// Static facts about a named method that do not need its coefficients:
/// stage count, FSAL property, order and the tuned PID parameters.
struct MethodInfo {
  std::string_view name;
  int stages;
  bool fsal;
  int order_q;
  int order_q_hat;
  std::array<double, 3> beta;
};

[[nodiscard]] const std::vector<MethodInfo>& known_methods();

/// Throws LookupError for an unknown name.
[[nodiscard]] const MethodInfo& method_info(std::string_view name);

/// Returns one of BS3_3F, RDPK3_5F, RDPK4_9F, SSP3_4.
///
/// BS3_3F and SSP3_4 are compiled in. The RDPK pairs are read from
/// `<tableau_directory()>/<name>.txt`; a missing file raises LookupError and a
/// file that fails check_integrity() raises IntegrityError.
[[nodiscard]] ButcherTableau builtin(std::string_view name);

/// Whether builtin(name) can currently produce coefficients.
[[nodiscard]] bool builtin_available(std::string_view name);

/// $RKCTL_TABLEAU_DIR if set, otherwise the data directory of the build.
[[nodiscard]] std::filesystem::path tableau_directory();

/// Parses the labeled-block coefficient format (blocks A, b, bhat, c, order,
/// order_hat, fsal and optional name; '#' starts a comment).
[[nodiscard]] ButcherTableau parse_tableau(std::string_view text,
                                           std::string default_name);
[[nodiscard]] ButcherTableau load_tableau(const std::filesystem::path& path);

/// Serializes with 17 significant digits so that parse_tableau() restores the
/// coefficients bit for bit.
[[nodiscard]] std::string format_tableau(const ButcherTableau& tab);

/// Residuals of the eight rooted-tree conditions up to order 4, ordered
/// [1 | 2 | 3a 3b | 4a 4b 4c 4d].
using OrderResiduals = std::array<double, 8>;

struct OrderReport {
  int main_order = 0;
  int embedded_order = 0;
  OrderResiduals main_residuals{};
  OrderResiduals embedded_residuals{};
};

inline constexpr double kOrderConditionTolerance = 1e-12;

/// Highest order (0..4) whose conditions all hold to 1e-12, for b and for the
/// embedded weights. The FSAL stage enters as stage s+1 with c = 1 and row b.
[[nodiscard]] OrderReport validate_order(const ButcherTableau& tab);

/// Row-sum consistency, weight sums, FSAL flag and validate_order() agreement
/// with the declared orders. Throws IntegrityError describing the first
/// failure.
void check_integrity(const ButcherTableau& tab);

/// Coefficients gamma_k of R(z) = sum_k gamma_k z^k, k = 0..s, with
/// gamma_0 = 1 and gamma_k = b^T A^{k-1} 1.
[[nodiscard]] std::vector<double> stability_polynomial(const ButcherTableau& tab);

[[nodiscard]] std::complex<double> stability_function(const ButcherTableau& tab,
                                                      std::complex<double> z);

/// Horner evaluation of a real-coefficient polynomial at a complex point.
[[nodiscard]] std::complex<double> evaluate_polynomial(
    const std::vector<double>& coefficients, std::complex<double> z);

/// New right-hand side evaluations per accepted step: s, for FSAL pairs too
/// (the extra evaluation replaces the next step's first stage).
[[nodiscard]] double effective_stage_count(const ButcherTableau& tab);

/// Largest x > 0 with |R(-x)| <= 1 on the first exit from the stability
/// region along the negative real axis.
[[nodiscard]] double real_axis_stability_limit(const ButcherTableau& tab);

}  // namespace rkctl
