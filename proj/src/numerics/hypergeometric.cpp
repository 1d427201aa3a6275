#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "igfade/numerics.hpp"

namespace igfade::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Sums a hypergeometric series given the ratio t_{k+1}/t_k. Stops once a
// term is below machine precision of the running sum and the ratio magnitude
// has dropped under one, or when the series terminates.
template <typename Ratio>
double hypergeometric_series(Ratio ratio, std::size_t max_terms, const char* name) {
    double sum = 1.0;
    double comp = 0.0;
    double term = 1.0;
    for (std::size_t k = 0; k < max_terms; ++k) {
        const double r = ratio(static_cast<double>(k));
        term *= r;
        if (term == 0.0) return sum + comp;
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (std::abs(term) <= kEps * std::abs(sum + comp) && std::abs(r) < 1.0) return sum + comp;
        if (!std::isfinite(sum)) throw ConvergenceError(std::string(name) + ": overflow", sum, 0.0);
    }
    throw ConvergenceError(std::string(name) + ": series did not converge", sum + comp, std::abs(term));
}

// Positive-term series returned as a logarithm. The running sum is rescaled
// whenever it grows past 1e280. Positive terms cannot cancel, so the budget is
// generous: slow convergence near z = 1 needs many terms, never more accuracy.
template <typename Ratio>
double log_positive_series(Ratio ratio, std::size_t max_terms, const char* name) {
    constexpr double kRescale = 1e-280;
    const double log_rescale = std::log(1e280);
    double sum = 1.0;
    double comp = 0.0;
    double term = 1.0;
    double log_scale = 0.0;
    const std::size_t budget = std::max<std::size_t>(max_terms, 1000000);
    for (std::size_t k = 0; k < budget; ++k) {
        const double r = ratio(static_cast<double>(k));
        term *= r;
        if (term == 0.0) return std::log(sum + comp) + log_scale;
        const double t = sum + term;
        comp += (sum - t) + term;
        sum = t;
        if (sum > 1e280) {
            sum *= kRescale;
            comp *= kRescale;
            term *= kRescale;
            log_scale += log_rescale;
        }
        if (term <= kEps * sum && r < 1.0) return std::log(sum + comp) + log_scale;
    }
    throw ConvergenceError(std::string(name) + ": series did not converge",
                           std::log(sum + comp) + log_scale, std::abs(term));
}

struct SignedLog {
    double log_abs;
    double sign;
};

SignedLog signed_ln_gamma(double x) {
    if (x > 0.0) return {std::lgamma(x), 1.0};
    // Gamma alternates sign between the poles on the negative axis.
    const double g = std::tgamma(x);
    return {std::lgamma(x), std::signbit(g) ? -1.0 : 1.0};
}

// log |Gamma(p) Gamma(q) / (Gamma(r) Gamma(s))| and its sign.
std::pair<double, double> signed_ln_gamma_ratio(double p, double q, double r, double s) {
    if (is_nonpositive_integer(r) || is_nonpositive_integer(s)) return {-INFINITY, 0.0};
    const SignedLog gp = signed_ln_gamma(p), gq = signed_ln_gamma(q);
    const SignedLog gr = signed_ln_gamma(r), gs = signed_ln_gamma(s);
    return {gp.log_abs + gq.log_abs - gr.log_abs - gs.log_abs, gp.sign * gq.sign * gr.sign * gs.sign};
}

}  // namespace

double hyp1f1(double a, double b, double z, const Tolerance& tol) {
    if (is_nonpositive_integer(b)) throw PoleError("hyp1f1: b is a nonpositive integer");
    if (z == 0.0 || a == 0.0) return 1.0;
    if (a == b) return std::exp(z);
    if (z < 0.0 && !is_nonpositive_integer(a)) {
        // Kummer's transformation keeps the summed series free of cancellation.
        return std::exp(z) * hyp1f1(b - a, b, -z, tol);
    }
    return hypergeometric_series(
        [&](double k) { return (a + k) * z / ((b + k) * (k + 1.0)); }, tol.max_terms, "hyp1f1");
}

double hyp2f1(double a, double b, double c, double z, const Tolerance& tol) {
    if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a nonpositive integer");
    if (!(z < 1.0)) throw DomainError("hyp2f1: requires z < 1");
    if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
    if (z < -2.0 && !is_near_integer(b - a)) {
        // 1/(1-z) connection formula; both series converge geometrically with ratio < 1/3.
        const double x = 1.0 / (1.0 - z);
        const auto [lc1, sc1] = signed_ln_gamma_ratio(c, b - a, b, c - a);
        const auto [lc2, sc2] = signed_ln_gamma_ratio(c, a - b, a, c - b);
        const double t1 = sc1 * std::exp(lc1 - a * std::log1p(-z)) * hyp2f1(a, c - b, a - b + 1.0, x, tol);
        const double t2 = sc2 * std::exp(lc2 - b * std::log1p(-z)) * hyp2f1(b, c - a, b - a + 1.0, x, tol);
        return t1 + t2;
    }
    if (z < -0.5) {
        // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)), or the same
        // with a and b exchanged. Prefer a terminating form, else the faster decay.
        const double w = z / (z - 1.0);
        const bool use_a = is_nonpositive_integer(c - b) ||
                           (!is_nonpositive_integer(c - a) && a <= b);
        if (use_a) return std::pow(1.0 - z, -a) * hyp2f1(a, c - b, c, w, tol);
        return std::pow(1.0 - z, -b) * hyp2f1(c - a, b, c, w, tol);
    }
    return hypergeometric_series(
        [&](double k) { return (a + k) * (b + k) * z / ((c + k) * (k + 1.0)); }, tol.max_terms,
        "hyp2f1");
}

double log_hyp1f1(double a, double b, double z, const Tolerance& tol) {
    if (!(a > 0.0 && b > 0.0 && z >= 0.0)) {
        throw DomainError("log_hyp1f1: needs a > 0, b > 0, z >= 0");
    }
    if (z == 0.0) return 0.0;
    if (a == b) return z;
    return log_positive_series([&](double k) { return (a + k) * z / ((b + k) * (k + 1.0)); },
                               tol.max_terms, "log_hyp1f1");
}

double log_hyp2f1(double a, double b, double c, double z, const Tolerance& tol) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0 && z >= 0.0 && z < 1.0)) {
        throw DomainError("log_hyp2f1: needs a, b, c > 0 and 0 <= z < 1");
    }
    if (z == 0.0) return 0.0;
    return log_positive_series(
        [&](double k) { return (a + k) * (b + k) * z / ((c + k) * (k + 1.0)); }, tol.max_terms,
        "log_hyp2f1");
}

double hyp1f2(double a, double b, double c, double z, const Tolerance& tol) {
    if (is_nonpositive_integer(b) || is_nonpositive_integer(c)) {
        throw PoleError("hyp1f2: b or c is a nonpositive integer");
    }
    if (z == 0.0 || a == 0.0) return 1.0;
    return hypergeometric_series(
        [&](double k) { return (a + k) * z / ((b + k) * (c + k) * (k + 1.0)); }, tol.max_terms,
        "hyp1f2");
}

}  // namespace igfade::numerics
