#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rkctl {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (length mismatch, bad range, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Unknown identifier (method name, problem name, config key).
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Coefficient data that does not satisfy the tableau invariants.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of a function (e.g. h <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised from inside a right-hand side when the state is unphysical or
/// non-finite. The integrator converts it into a BlowUpError.
class SolutionError : public Error {
 public:
  using Error::Error;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

/// Numerical method failed to converge (eigensolver iteration cap, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotLinearError : public Error {
 public:
  using Error::Error;
};

/// Real roots requested for a cubic with a negative discriminant.
class HyperbolicityLossError : public Error {
 public:
  using Error::Error;
};

/// bisect_max_cfl called with an interval that does not bracket the limit.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Time integration produced non-finite or invalid values. Carries the last
/// accepted state so callers can report diagnostics.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t, int stage,
              std::vector<double> last_good)
      : Error(what), t_(t), stage_(stage), last_good_(std::move(last_good)) {}

  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] int stage() const noexcept { return stage_; }
  [[nodiscard]] const std::vector<double>& last_good_state() const noexcept {
    return last_good_;
  }

 private:
  double t_;
  int stage_;
  std::vector<double> last_good_;
};

/// Step size collapsed below dt_min.
class StagnationError : public Error {
 public:
  StagnationError(const std::string& what, double t, double dt)
      : Error(what), t_(t), dt_(dt) {}
  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] double dt() const noexcept { return dt_; }

 private:
  double t_;
  double dt_;
};

}  // namespace rkctl
