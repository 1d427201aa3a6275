#pragma once

#include <cstddef>
#include <functional>

#include "igfade/errors.hpp"

namespace igfade {

/// Accuracy budget shared by every series and quadrature routine.
struct Tolerance {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_terms = 10000;
    std::size_t max_subdivisions = 60;

    /// Throws DomainError unless rel_tol > 0, abs_tol >= 0 and both limits >= 1.
    void validate() const;
};

/// Value together with an estimate of its absolute error.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct SeriesSum {
    double value = 0.0;
    std::size_t terms = 0;
};

enum class QuadratureRule {
    Adaptive,  ///< Gauss-Kronrod 10/21 with global bisection
    Periodic,  ///< equally spaced rule, point doubling; for a full period of a smooth periodic f
};

namespace numerics {

// Special functions. All throw DomainError outside their stated domain.

double ln_gamma(double x);
double ln_beta(double a, double b);

/// Regularized lower incomplete gamma P(a, z) = gamma(a, z) / Gamma(a).
double reg_lower_gamma(double a, double z);
/// Regularized upper incomplete gamma Q(a, z) = 1 - P(a, z).
double reg_upper_gamma(double a, double z);

double erf(double x);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and 0 <= x <= 1.
double reg_incomplete_beta(double a, double b, double x);

/// Modified Bessel function of the first kind I_nu(x). Non-integer orders need x >= 0.
double bessel_i(double order, double x);
/// exp(-|x|) * I_nu(x); finite for arguments where I_nu overflows.
double bessel_i_scaled(double order, double x);

/// Kummer's confluent hypergeometric 1F1(a; b; z).
double hyp1f1(double a, double b, double z, const Tolerance& tol = {});
/// Gauss hypergeometric 2F1(a, b; c; z) for z < 1.
double hyp2f1(double a, double b, double c, double z, const Tolerance& tol = {});
/// Generalized hypergeometric 1F2(a; b, c; z).
double hyp1f2(double a, double b, double c, double z, const Tolerance& tol = {});

/// ln 1F1(a; b; z) for a, b > 0 and z >= 0, where every series term is positive.
/// Rescales internally, so the result is finite even when 1F1 overflows a double.
double log_hyp1f1(double a, double b, double z, const Tolerance& tol = {});
/// ln 2F1(a, b; c; z) for a, b, c > 0 and 0 <= z < 1 (positive-term series).
double log_hyp2f1(double a, double b, double c, double z, const Tolerance& tol = {});

/// True when x is within 1e-9 of an integer.
bool is_near_integer(double x);

// Summation and quadrature.

/// Neumaier-compensated sum of term(0), term(1), ...; stops once three
/// consecutive terms each satisfy |t| <= rel_tol * |sum|.
/// Throws ConvergenceError (partial sum attached) if max_terms is reached.
SeriesSum sum_series(const std::function<double(std::size_t)>& term, const Tolerance& tol = {});

Estimate integrate_finite(const std::function<double(double)>& f, double a, double b,
                          const Tolerance& tol = {}, QuadratureRule rule = QuadratureRule::Adaptive);

/// Integral over [0, inf) through x = scale * t / (1 - t).
Estimate integrate_semi_infinite(const std::function<double(double)>& f, const Tolerance& tol = {},
                                 double scale = 1.0);

}  // namespace numerics
}  // namespace igfade
