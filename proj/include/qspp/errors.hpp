#pragma once

#include <stdexcept>
#include <string>

namespace qspp {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the function's domain (e.g. |x| > 1 for a
/// Chebyshev series).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Target function is non-finite or leaves [0, 1] on its domain.
class InvalidTarget : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The minimax linear program has no feasible point.
class FitInfeasible : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Polynomial exceeds |P| <= 1 somewhere on [-1, 1].
class NormViolation : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Phase optimisation did not reach tolerance within its iteration budget.
class ConvergenceFailure : public std::runtime_error {
  public:
    ConvergenceFailure(const std::string &what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    [[nodiscard]] double best_residual() const noexcept {
        return best_residual_;
    }

  private:
    double best_residual_;
};

/// Fixed-point value does not fit the output register format.
class RangeError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Statevector or enumeration would exceed the configured size cap.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Resource accountant met a gate it has no cost rule for.
class AccountingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qspp
