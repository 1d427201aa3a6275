#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "igfade/numerics.hpp"

namespace igfade::numerics {

namespace {

// Gauss-Kronrod 10/21 abscissae and weights (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double roundoff;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    double fv1[10];
    double fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double pair = fv1[j] + fv2[j];
        resk += kWgk[j] * pair;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * pair;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }
    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double error = std::abs((resk - resg) * half);
    const double roundoff = 50.0 * kEps * resabs;
    if (resasc != 0.0 && error != 0.0) {
        error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
    }
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        error = std::max(roundoff, error);
    }
    return {a, b, value, error, roundoff};
}

Estimate adaptive(const std::function<double(double)>& f, double a, double b, const Tolerance& tol) {
    std::priority_queue<Segment> heap;
    heap.push(gauss_kronrod21(f, a, b));
    double total = heap.top().value;
    double error = heap.top().error;
    double roundoff = heap.top().roundoff;
    for (std::size_t split = 0;; ++split) {
        if (error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) return {total, error};
        // Every segment sits at its rounding floor: bisecting further cannot help.
        if (error <= roundoff * (1.0 + 1e-12)) return {total, error};
        if (split >= tol.max_subdivisions) break;
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gauss_kronrod21(f, worst.a, mid);
        const Segment right = gauss_kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        roundoff += left.roundoff + right.roundoff - worst.roundoff;
        heap.push(left);
        heap.push(right);
    }
    // Re-add from scratch so the returned value carries no drift from updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    throw ConvergenceError("integrate_finite: subdivision limit reached", total, error);
}

Estimate periodic(const std::function<double(double)>& f, double a, double b, const Tolerance& tol) {
    const double length = b - a;
    std::size_t n = 8;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += f(a + length * static_cast<double>(i) / n);
    double previous = sum * length / n;
    constexpr std::size_t kMaxLevels = 17;
    const std::size_t levels = std::min(kMaxLevels, tol.max_subdivisions);
    for (std::size_t level = 0; level < levels; ++level) {
        double added = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            added += f(a + length * (static_cast<double>(i) + 0.5) / n);
        }
        sum += added;
        n *= 2;
        const double current = sum * length / n;
        const double diff = std::abs(current - previous);
        if (n >= 32 && diff <= std::max(tol.abs_tol, tol.rel_tol * std::abs(current))) {
            return {current, diff};
        }
        previous = current;
    }
    throw ConvergenceError("integrate_finite: periodic rule did not converge", previous, 0.0);
}

}  // namespace

Estimate integrate_finite(const std::function<double(double)>& f, double a, double b,
                          const Tolerance& tol, QuadratureRule rule) {
    tol.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_finite: infinite limit");
    if (a == b) return {0.0, 0.0};
    if (rule == QuadratureRule::Periodic) return periodic(f, a, b, tol);
    return adaptive(f, a, b, tol);
}

Estimate integrate_semi_infinite(const std::function<double(double)>& f, const Tolerance& tol,
                                 double scale) {
    if (!(scale > 0.0)) throw DomainError("integrate_semi_infinite: scale must be positive");
    auto mapped = [&](double t) {
        const double one_minus = 1.0 - t;
        const double x = scale * t / one_minus;
        if (!std::isfinite(x)) return 0.0;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx * scale / (one_minus * one_minus);
    };
    return integrate_finite(mapped, 0.0, 1.0, tol);
}

}  // namespace igfade::numerics
