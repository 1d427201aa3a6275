#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "igfade/numerics.hpp"

namespace igfade::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kIncompleteGammaMaxIter = 200000;

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

// P(a, z) by its power series; valid (and fast) for z < a + 1.
double lower_gamma_series(double a, double z) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (std::size_t n = 0; n < kIncompleteGammaMaxIter; ++n) {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum * std::exp(-z + a * std::log(z) - ln_gamma(a));
        }
    }
    throw ConvergenceError("reg_lower_gamma: series did not converge", sum, std::abs(term));
}

// Q(a, z) by the modified Lentz continued fraction; valid for z >= a + 1.
double upper_gamma_fraction(double a, double z) {
    constexpr double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (std::size_t i = 1; i < kIncompleteGammaMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return std::exp(-z + a * std::log(z) - ln_gamma(a)) * h;
        }
    }
    throw ConvergenceError("reg_upper_gamma: continued fraction did not converge", h, 0.0);
}

// Ascending series for I_nu(x), x >= 0, returned multiplied by exp(-x).
double bessel_i_series_scaled(double nu, double x) {
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        // Non-integer negative order diverges at the origin.
        return std::numeric_limits<double>::infinity();
    }
    const double half = 0.5 * x;
    const double q = half * half;
    // Leading term (x/2)^nu / Gamma(nu + 1), computed through logs with its sign.
    const double g = std::tgamma(nu + 1.0);
    double term = std::exp(nu * std::log(half) - x) / g;
    if (!std::isfinite(term)) {
        const double sign = std::signbit(g) ? -1.0 : 1.0;
        term = sign * std::exp(nu * std::log(half) - x - std::lgamma(nu + 1.0));
    }
    double sum = term;
    for (std::size_t k = 1; k < 100000; ++k) {
        const double kd = static_cast<double>(k);
        term *= q / (kd * (kd + nu));
        sum += term;
        if (std::abs(term) <= kEps * std::abs(sum) && kd > half) return sum;
    }
    throw ConvergenceError("bessel_i: series did not converge", sum, std::abs(term));
}

// Large-argument expansion of exp(-x) I_nu(x).
double bessel_i_asymptotic_scaled(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::abs(term);
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * x);
        if (std::abs(term) > prev) break;  // asymptotic series started to diverge
        sum += term;
        prev = std::abs(term);
        if (prev <= kEps * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// Continued fraction for I_x(a, b) (modified Lentz); converges fast for
// x < (a + 1) / (a + b + 2).
double incomplete_beta_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (std::size_t m = 1; m < kIncompleteGammaMaxIter; ++m) {
        const double md = static_cast<double>(m);
        const double m2 = 2.0 * md;
        double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    throw ConvergenceError("reg_incomplete_beta: continued fraction did not converge", h, 0.0);
}

}  // namespace

double ln_gamma(double x) {
    require(x > 0.0 && std::isfinite(x), "ln_gamma: argument must be positive");
    return std::lgamma(x);
}

double ln_beta(double a, double b) {
    require(a > 0.0 && b > 0.0, "ln_beta: arguments must be positive");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double reg_lower_gamma(double a, double z) {
    require(a > 0.0 && std::isfinite(a), "reg_lower_gamma: shape must be positive");
    require(z >= 0.0 && !std::isnan(z), "reg_lower_gamma: argument must be nonnegative");
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return 1.0;
    if (z < a + 1.0) return lower_gamma_series(a, z);
    return 1.0 - upper_gamma_fraction(a, z);
}

double reg_upper_gamma(double a, double z) {
    require(a > 0.0 && std::isfinite(a), "reg_upper_gamma: shape must be positive");
    require(z >= 0.0 && !std::isnan(z), "reg_upper_gamma: argument must be nonnegative");
    if (z == 0.0) return 1.0;
    if (std::isinf(z)) return 0.0;
    if (z < a + 1.0) return 1.0 - lower_gamma_series(a, z);
    return upper_gamma_fraction(a, z);
}

double erf(double x) { return std::erf(x); }

double reg_incomplete_beta(double a, double b, double x) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "reg_incomplete_beta: a and b must be positive");
    require(x >= 0.0 && x <= 1.0, "reg_incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * incomplete_beta_fraction(a, b, x) / a;
    }
    return 1.0 - std::exp(log_front) * incomplete_beta_fraction(b, a, 1.0 - x) / b;
}

bool is_near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

double bessel_i_scaled(double order, double x) {
    require(!std::isnan(order) && !std::isnan(x), "bessel_i: NaN argument");
    const bool integer_order = is_near_integer(order);
    double nu = order;
    double sign = 1.0;
    if (integer_order) {
        const long n = std::lround(std::abs(order));
        nu = static_cast<double>(n);
        if (x < 0.0 && (n % 2 != 0)) sign = -1.0;
        x = std::abs(x);
    } else {
        require(x >= 0.0, "bessel_i: non-integer order needs a nonnegative argument");
    }
    const bool asymptotic = x > 30.0 && x > 2.0 * nu * nu && nu >= 0.0;
    return sign * (asymptotic ? bessel_i_asymptotic_scaled(nu, x) : bessel_i_series_scaled(nu, x));
}

double bessel_i(double order, double x) {
    const double scaled = bessel_i_scaled(order, x);
    return scaled * std::exp(std::abs(x));
}

}  // namespace igfade::numerics
