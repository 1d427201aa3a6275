// Generalized moment generating functions E[X^p e^{sX}] of the baseline models.

#include <cmath>
#include <numbers>

#include "detail/common.hpp"
#include "igfade/fading.hpp"

namespace igfade::fading {

namespace {

using detail::Overloaded;
using detail::require;
namespace nm = numerics;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Largest integer order sent to the finite TWDP closed form. Its inner sums
// alternate, so higher orders go to the periodic integral instead.
constexpr int kTwdpClosedFormMaxOrder = 20;

double log_gmgf_gamma(double k, double omega, double p, double s) {
    // X ~ Gamma(k, mean omega): E[X^p e^{sX}] = Gamma(k+p)/Gamma(k) (omega/k)^p (1 - s omega/k)^{-(k+p)}.
    const double theta = omega / k;
    return std::lgamma(k + p) - std::lgamma(k) + p * std::log(theta) - (k + p) * std::log1p(-s * theta);
}

// TWDP through one periodic integral over the specular phase difference:
//   (1+K) e^{-K} Gamma(p+1) / (2 pi Omega a^{p+1}) int_0^{2pi} e^{-K Delta cos t} 1F1(p+1; 1; b(t)/a) dt
// with a = (1+K)/Omega - s and b(t) = K (1+K) (1 + Delta cos t) / Omega.
double log_gmgf_twdp_periodic(const TWDP& m, double p, double s, const Tolerance& tol) {
    const double k = m.k_r;
    const double a = (1.0 + k) / m.omega_x - s;
    const double head = std::log1p(k) - k + std::lgamma(p + 1.0) - std::log(m.omega_x) - (p + 1.0) * std::log(a);
    if (k == 0.0) return head;
    auto exponent = [&](double t) {
        const double c = std::cos(t);
        const double z = k * (1.0 + k) * (1.0 + m.delta * c) / (m.omega_x * a);
        return -k * m.delta * c + nm::log_hyp1f1(p + 1.0, 1.0, z, tol);
    };
    const double shift = std::max(exponent(0.0), exponent(std::numbers::pi));
    const Estimate integral = nm::integrate_finite(
        [&](double t) { return std::exp(exponent(t) - shift); }, 0.0, kTwoPi, tol,
        QuadratureRule::Periodic);
    return head + shift + std::log(integral.value / kTwoPi);
}

double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

// Finite closed form for integer p. Both 1F2 arguments use K + 1 - Omega s.
double gmgf_twdp_closed(const TWDP& m, int p, double s, const Tolerance& tol) {
    const double k = m.k_r;
    const double w = m.omega_x;
    const double d = k + 1.0 - w * s;
    const double z = k * m.delta * w * s / d;
    const double z2 = 0.25 * z * z;
    double total = 0.0;
    for (int q = 0; q <= p; ++q) {
        const double head = std::exp(std::lgamma(p + 1.0) - std::lgamma(q + 1.0)) * binomial(p, q) *
                            std::pow(k, q) * std::pow(k + 1.0, q + 1) * std::pow(d, -(p + q + 1.0)) *
                            std::exp(k * w * s / d);
        double inner = 0.0;
        for (int j = 0; j <= q; ++j) {
            const double jd = j;
            double part = 0.0;
            if (j % 2 == 0) {
                part = 2.0 * std::exp(nm::ln_beta((jd + 1.0) / 2.0, 0.5)) *
                       nm::hyp1f2((jd + 1.0) / 2.0, 0.5, (jd + 2.0) / 2.0, z2, tol);
            } else {
                part = 2.0 * z * std::exp(nm::ln_beta((jd + 2.0) / 2.0, 0.5)) *
                       nm::hyp1f2((jd + 2.0) / 2.0, 1.5, (jd + 3.0) / 2.0, z2, tol);
            }
            inner += binomial(q, j) * std::pow(m.delta, j) / 2.0 * part;
        }
        total += head * inner;
    }
    return std::pow(w, p) / std::numbers::pi * total;
}

void check_arguments(double p, double s) {
    require(p >= 0.0 && std::isfinite(p), "gmgf: p must be a nonnegative real");
    require(s <= 0.0 && std::isfinite(s), "gmgf: s must be a nonpositive real");
}

}  // namespace

double log_gmgf(const FadingModel& model, double p, double s, const Tolerance& tol) {
    validate(model);
    check_arguments(p, s);
    return std::visit(
        Overloaded{
            [&](const Rayleigh& m) { return log_gmgf_gamma(1.0, m.omega_x, p, s); },
            [&](const NakagamiM& m) { return log_gmgf_gamma(m.m_f, m.omega_x, p, s); },
            [&](const Rician& m) {
                const double k = m.k_r;
                const double d = 1.0 + k - s * m.omega_x;
                return std::log1p(k) - k + std::lgamma(p + 1.0) + p * std::log(m.omega_x) -
                       (p + 1.0) * std::log(d) + nm::log_hyp1f1(p + 1.0, 1.0, k * (1.0 + k) / d, tol);
            },
            [&](const Hoyt& m) {
                const double q2 = m.q * m.q;
                const double d = q2 + 1.0 - 2.0 * s * q2 * m.omega_x;
                return p * std::log(2.0) + (2.0 * p + 1.0) * std::log(m.q) + std::lgamma(p + 1.0) +
                       p * std::log(m.omega_x) + std::log(q2 + 1.0) - (p + 1.0) * std::log(d) +
                       nm::log_hyp2f1(0.5, p + 1.0, 1.0, (1.0 - q2 * q2) / d, tol);
            },
            [&](const KappaMu& m) {
                const double mu = m.mu;
                const double kap = m.kappa;
                const double d = mu * (1.0 + kap) - s * m.omega_x;
                return std::lgamma(mu + p) - std::lgamma(mu) + p * std::log(m.omega_x) +
                       mu * std::log(mu * (1.0 + kap)) - mu * kap - (mu + p) * std::log(d) +
                       nm::log_hyp1f1(mu + p, mu, mu * mu * kap * (1.0 + kap) / d, tol);
            },
            [&](const EtaMu& m) {
                const double mu = m.mu;
                const double eta = m.eta;
                const double d = mu * (eta + 1.0) / eta - s * m.omega_x;
                const double z = mu * (1.0 - eta * eta) / (mu * (1.0 + eta) - s * eta * m.omega_x);
                return 2.0 * mu * std::log(mu) + std::lgamma(p + 2.0 * mu) + p * std::log(m.omega_x) +
                       2.0 * mu * std::log(eta + 1.0) - mu * std::log(eta) - std::lgamma(2.0 * mu) -
                       (p + 2.0 * mu) * std::log(d) + nm::log_hyp2f1(mu, 2.0 * mu + p, 2.0 * mu, z, tol);
            },
            [&](const KappaMuShadowed& m) {
                const double mu = m.mu;
                const double kap = m.kappa;
                const double mf = m.m_f;
                const double d = mu * (1.0 + kap) - s * m.omega_x;
                const double z = mu * mu * kap * (1.0 + kap) / ((mu * kap + mf) * d);
                return std::lgamma(mu + p) - std::lgamma(mu) + mf * std::log(mf) + p * std::log(m.omega_x) +
                       mu * std::log(mu * (1.0 + kap)) - mf * std::log(mu * kap + mf) -
                       (mu + p) * std::log(d) + nm::log_hyp2f1(mf, mu + p, mu, z, tol);
            },
            [&](const TWDP& m) { return log_gmgf_twdp_periodic(m, p, s, tol); },
        },
        model);
}

double gmgf(const FadingModel& model, double p, double s, const Tolerance& tol) {
    if (const auto* twdp = std::get_if<TWDP>(&model)) {
        validate(model);
        check_arguments(p, s);
        if (p == std::round(p) && p <= kTwdpClosedFormMaxOrder) {
            return gmgf_twdp_closed(*twdp, static_cast<int>(p), s, tol);
        }
    }
    return std::exp(log_gmgf(model, p, s, tol));
}

Estimate gmgf_numeric(const FadingModel& model, double p, double s, const Tolerance& tol) {
    validate(model);
    check_arguments(p, s);
    const double omega = mean_power(model);
    const double scale = omega * (1.0 + p) / (1.0 - s * omega);
    return nm::integrate_semi_infinite(
        [&](double x) {
            const double f = pdf(model, x, tol);
            if (f == 0.0) return 0.0;
            return std::exp(p * std::log(x) + s * x) * f;
        },
        tol, scale);
}

}  // namespace igfade::fading
