#pragma once

#include <stdexcept>
#include <string>

namespace hoskip {

/// A parameter violated one of its invariants. `field()` names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An integrand produced a non-finite value at an interior abscissa.
class DomainError : public std::domain_error {
 public:
  DomainError(double abscissa, const std::string& what)
      : std::domain_error(what + " at x=" + std::to_string(abscissa)), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Quadrature did not reach its tolerance within the subdivision limit.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string integral, double value, double error_estimate)
      : std::runtime_error(integral + " did not converge: value=" + std::to_string(value) +
                           " error_estimate=" + std::to_string(error_estimate)),
        integral_(std::move(integral)),
        error_estimate_(error_estimate) {}

  const std::string& integral() const noexcept { return integral_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  std::string integral_;
  double error_estimate_;
};

/// A nested evaluation exceeded its integrand-evaluation budget.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(std::string integral, long long evaluations)
      : std::runtime_error(integral + " exceeded its evaluation budget after " +
                           std::to_string(evaluations) + " integrand evaluations"),
        integral_(std::move(integral)),
        evaluations_(evaluations) {}

  const std::string& integral() const noexcept { return integral_; }
  long long evaluations() const noexcept { return evaluations_; }

 private:
  std::string integral_;
  long long evaluations_;
};

}  // namespace hoskip
