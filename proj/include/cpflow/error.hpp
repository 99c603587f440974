#pragma once

#include <stdexcept>
#include <string>

namespace cpflow {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The base profile violates the no-reversal condition required by the operation.
class InadmissibleProfile : public Error {
public:
    using Error::Error;
};

/// A linear system is numerically singular.  Carries the estimated condition
/// number relative to the clamped biharmonic reference operator.
class NearSingularSystem : public Error {
public:
    NearSingularSystem(const std::string& what, double relative_condition)
        : Error(what), relative_condition_(relative_condition) {}
    double relative_condition() const noexcept { return relative_condition_; }

private:
    double relative_condition_;
};

/// Input data is not resolved by the chosen discretization.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// A precondition on the input was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed (escaped its ball, stopped contracting, ...).
class SolverError : public Error {
public:
    using Error::Error;
};

/// A Picard iterate left the ball of radius delta.
class BallEscape : public SolverError {
public:
    BallEscape(const std::string& what, int iteration, double norm)
        : SolverError(what), iteration_(iteration), norm_(norm) {}
    int iteration() const noexcept { return iteration_; }
    double norm() const noexcept { return norm_; }

private:
    int iteration_;
    double norm_;
};

/// Successive Picard increments failed to shrink several times in a row.
class NonContraction : public SolverError {
public:
    using SolverError::SolverError;
};

/// The neutral search bracket does not enclose a sign change of the growth rate.
class NoBracket : public SolverError {
public:
    using SolverError::SolverError;
};

/// The neutral search stopped before reaching its tolerance.  Carries the
/// best iterate: -3A, T, and the leading eigenvalue there.
class NeutralNotConverged : public SolverError {
public:
    NeutralNotConverged(const std::string& what, double reA, double T, double re_lambda, double im_lambda)
        : SolverError(what), reA_(reA), T_(T), re_(re_lambda), im_(im_lambda) {}
    double best_reA() const noexcept { return reA_; }
    double best_T() const noexcept { return T_; }
    double best_re_lambda() const noexcept { return re_; }
    double best_im_lambda() const noexcept { return im_; }

private:
    double reA_, T_, re_, im_;
};

/// Configuration file or flag problem; mapped to exit code 2 by the CLI.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace cpflow
