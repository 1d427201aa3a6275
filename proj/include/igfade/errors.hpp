#pragma once

#include <stdexcept>
#include <string>

namespace igfade {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Hypergeometric evaluation at a nonpositive-integer lower parameter.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested strategy, model or sampler is not available for the inputs.
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A series or quadrature ran out of its term/subdivision budget.
/// Carries the best estimate reached so far and its error estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), error_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_; }

private:
    double best_;
    double error_;
};

}  // namespace igfade
