#include "igfade/fading.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "detail/common.hpp"
#include "igfade/random.hpp"

namespace igfade::fading {

namespace {

using detail::log_gamma_pdf;
using detail::Overloaded;
using detail::positive;
using detail::require;
namespace nm = numerics;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinMixtureTerms = 10;
constexpr std::size_t kMaxMixtureTerms = 5000;

// Weight-mass truncation shared by every gamma mixture. `log_weight(i)` is the
// log of the i-th raw weight (before the prefactor).
GammaMixture truncate_mixture(double prefactor, const std::function<double(std::size_t)>& log_weight,
                              const std::function<double(std::size_t)>& shape,
                              const std::function<double(std::size_t)>& omega, const Tolerance& tol) {
    GammaMixture mix;
    mix.prefactor = prefactor;
    const double target = tol.rel_tol * 1e-2;
    double mass = 0.0;
    double comp = 0.0;
    double peak = 0.0;
    std::size_t negligible_run = 0;
    for (std::size_t i = 0; i < kMaxMixtureTerms; ++i) {
        const double w = std::exp(log_weight(i));
        mix.terms.push_back({w, shape(i), omega(i)});
        const double contribution = prefactor * w;
        const double t = mass + contribution;
        comp += (mass - t) + contribution;
        mass = t;
        peak = std::max(peak, contribution);
        const double residual = 1.0 - (mass + comp);
        if (i + 1 >= kMinMixtureTerms && residual < target) break;
        // Past the peak and the weights no longer move the sum: rounding in the
        // weights themselves has set the floor on the residual.
        negligible_run = (contribution < peak && contribution < 1e-3 * target) ? negligible_run + 1 : 0;
        if (negligible_run >= kMinMixtureTerms) break;
    }
    mix.truncation_error_bound = std::max(0.0, 1.0 - (mass + comp));
    return mix;
}

// (1/2pi) int_0^{2pi} e^{-z cos t} (1 + Delta cos t)^j dt by the periodic rule.
double twdp_weight_integral(double z, double delta, std::size_t j, const Tolerance& tol) {
    const double jd = static_cast<double>(j);
    // Scale out the peak at t = 0 or t = pi so large j cannot overflow.
    auto log_f = [&](double t) {
        const double c = std::cos(t);
        return -z * c + (1.0 + delta * c > 0.0 ? jd * std::log1p(delta * c) : -INFINITY);
    };
    const double shift = std::max(log_f(0.0), log_f(std::numbers::pi));
    const Estimate e = nm::integrate_finite([&](double t) { return std::exp(log_f(t) - shift); }, 0.0,
                                            kTwoPi, tol, QuadratureRule::Periodic);
    return std::log(e.value / kTwoPi) + shift;
}

// ln of the TWDP weight w_j / (K^j / j!): the double Bessel sum of the weight
// formula, with I_{2l-i}(-K Delta) = (-1)^i I_{|2l-i|}(K Delta). The outer sum
// alternates; when it loses too many digits, the equivalent periodic integral is used.
class TwdpWeights {
public:
    TwdpWeights(double k, double delta, const Tolerance& tol) : z_(k * delta), delta_(delta), tol_(tol) {}

    double log_reduced(std::size_t j) {
        if (delta_ == 0.0 || z_ == 0.0) {
            // e^{-z cos t} = 1 or Delta = 0: the average of (1 + Delta cos t)^j.
            if (delta_ == 0.0) return 0.0;
            return twdp_weight_integral(0.0, delta_, j, tol_);
        }
        if (j <= kBesselSumMaxOrder) {
            double value = 0.0;
            double magnitude = 0.0;
            for (std::size_t i = 0; i <= j; ++i) {
                double inner = 0.0;
                for (std::size_t l = 0; l <= i; ++l) {
                    const long order = std::labs(2 * static_cast<long>(l) - static_cast<long>(i));
                    inner += binomial(i, l) * bessel(static_cast<std::size_t>(order));
                }
                const double term = binomial(j, i) * std::pow(delta_ / 2.0, static_cast<double>(i)) * inner;
                value += (i % 2 == 0 ? term : -term);
                magnitude += term;
            }
            if (value > 0.0 && magnitude * 1e-16 * static_cast<double>(j + 1) < 1e-3 * tol_.rel_tol * value) {
                return std::log(value);
            }
        }
        return twdp_weight_integral(z_, delta_, j, tol_);
    }

private:
    static constexpr std::size_t kBesselSumMaxOrder = 200;

    static double binomial(std::size_t n, std::size_t k) {
        return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
    }

    double bessel(std::size_t n) {
        while (cache_.size() <= n) cache_.push_back(nm::bessel_i(static_cast<double>(cache_.size()), z_));
        return cache_[n];
    }

    double z_;
    double delta_;
    Tolerance tol_;
    std::vector<double> cache_;
};

double poisson_log_weight(double mean, std::size_t i) {
    const double id = static_cast<double>(i);
    if (mean == 0.0) return i == 0 ? 0.0 : -INFINITY;
    return id * std::log(mean) - std::lgamma(id + 1.0);
}

// Negative-binomial weights Gamma(r+i)/(Gamma(r) i!) (1-p)^r p^i, in logs.
double negative_binomial_log_weight(double r, double p, std::size_t i) {
    const double id = static_cast<double>(i);
    if (p == 0.0) return i == 0 ? 0.0 : -INFINITY;
    return std::lgamma(r + id) - std::lgamma(r) - std::lgamma(id + 1.0) + r * std::log1p(-p) + id * std::log(p);
}

// The Hoyt and eta-mu powers are sums of two independent gamma variables with a
// common shape; that sum is a negative-binomial mixture of gammas. Used for
// their CDFs only (the public gamma_mixture does not offer these models).
GammaMixture two_gamma_sum_mixture(double mu, double eta, double omega, const Tolerance& tol) {
    // Shapes mu each, scales theta1 = 2 sigma_x^2 <= theta2 = 2 sigma_y^2, theta1/theta2 = eta.
    const double theta1 = omega * eta / (mu * (1.0 + eta));
    return truncate_mixture(
        1.0, [&](std::size_t i) { return negative_binomial_log_weight(mu, 1.0 - eta, i); },
        [&](std::size_t i) { return 2.0 * mu + static_cast<double>(i); },
        [&](std::size_t i) { return (2.0 * mu + static_cast<double>(i)) * theta1; }, tol);
}

double mixture_pdf(const GammaMixture& mix, double x) {
    double sum = 0.0;
    for (const auto& t : mix.terms) {
        if (t.weight == 0.0) continue;
        sum += t.weight * std::exp(log_gamma_pdf(t.shape, t.omega, x));
    }
    return mix.prefactor * sum;
}

double mixture_cdf(const GammaMixture& mix, double x) {
    double sum = 0.0;
    for (const auto& t : mix.terms) {
        if (t.weight == 0.0) continue;
        sum += t.weight * nm::reg_lower_gamma(t.shape, t.shape * x / t.omega);
    }
    return std::clamp(mix.prefactor * sum, 0.0, 1.0);
}

double twdp_pdf(const TWDP& m, double x, const Tolerance& tol) {
    const double k = m.k_r;
    const double lead = std::log1p(k) - std::log(m.omega_x) - (1.0 + k) * x / m.omega_x - k;
    if (k == 0.0) return std::exp(lead);
    // Integrand e^{-K Delta cos t} I_0(y(t)) kept in logs with the scaled Bessel function.
    auto log_g = [&](double t) {
        const double c = std::cos(t);
        const double y = 2.0 * std::sqrt(x * (1.0 + m.delta * c) * k * (1.0 + k) / m.omega_x);
        return -k * m.delta * c + y + std::log(nm::bessel_i_scaled(0.0, y));
    };
    const double shift = std::max(log_g(0.0), log_g(std::numbers::pi));
    const Estimate e = nm::integrate_finite([&](double t) { return std::exp(log_g(t) - shift); }, 0.0,
                                            kTwoPi, tol, QuadratureRule::Periodic);
    return std::exp(lead + shift) * e.value / kTwoPi;
}

// (alpha, beta) from a least-squares line through ln F against ln(x / omega).
TailParams numeric_tail(const FadingModel& model) {
    const double omega = mean_power(model);
    constexpr int kPoints = 11;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double lx = std::log(10.0) * (-6.0 + 2.0 * i / (kPoints - 1));
        const double ly = std::log(cdf(model, omega * std::exp(lx)));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / kPoints;
    return {slope * std::exp(intercept), slope - 1.0};
}

}  // namespace

void validate(const FadingModel& model) {
    std::visit(
        Overloaded{
            [](const Rayleigh& m) { require(positive(m.omega_x), "rayleigh: omega_x must be positive"); },
            [](const Rician& m) {
                require(m.k_r >= 0.0 && std::isfinite(m.k_r), "rician: K must be >= 0");
                require(positive(m.omega_x), "rician: omega_x must be positive");
            },
            [](const NakagamiM& m) {
                require(m.m_f >= 0.5 && std::isfinite(m.m_f), "nakagami: m must be >= 0.5");
                require(positive(m.omega_x), "nakagami: omega_x must be positive");
            },
            [](const Hoyt& m) {
                require(m.q > 0.0 && m.q <= 1.0, "hoyt: q must be in (0, 1]");
                require(positive(m.omega_x), "hoyt: omega_x must be positive");
            },
            [](const KappaMu& m) {
                require(m.kappa >= 0.0 && std::isfinite(m.kappa), "kappa-mu: kappa must be >= 0");
                require(positive(m.mu), "kappa-mu: mu must be positive");
                require(positive(m.omega_x), "kappa-mu: omega_x must be positive");
            },
            [](const EtaMu& m) {
                require(m.eta > 0.0 && m.eta <= 1.0, "eta-mu: eta must be in (0, 1]");
                require(positive(m.mu), "eta-mu: mu must be positive");
                require(positive(m.omega_x), "eta-mu: omega_x must be positive");
            },
            [](const KappaMuShadowed& m) {
                require(m.kappa >= 0.0 && std::isfinite(m.kappa), "kappa-mu shadowed: kappa must be >= 0");
                require(positive(m.mu), "kappa-mu shadowed: mu must be positive");
                require(positive(m.m_f), "kappa-mu shadowed: m must be positive");
                require(positive(m.omega_x), "kappa-mu shadowed: omega_x must be positive");
            },
            [](const TWDP& m) {
                require(m.k_r >= 0.0 && std::isfinite(m.k_r), "twdp: K must be >= 0");
                require(m.delta >= 0.0 && m.delta <= 1.0, "twdp: delta must be in [0, 1]");
                require(positive(m.omega_x), "twdp: omega_x must be positive");
            },
        },
        model);
}

std::string name(const FadingModel& model) {
    return std::visit(Overloaded{
                          [](const Rayleigh&) { return "rayleigh"; },
                          [](const Rician&) { return "rician"; },
                          [](const NakagamiM&) { return "nakagami"; },
                          [](const Hoyt&) { return "hoyt"; },
                          [](const KappaMu&) { return "kappa-mu"; },
                          [](const EtaMu&) { return "eta-mu"; },
                          [](const KappaMuShadowed&) { return "kappa-mu-shadowed"; },
                          [](const TWDP&) { return "twdp"; },
                      },
                      model);
}

double mean_power(const FadingModel& model) {
    return std::visit([](const auto& m) { return m.omega_x; }, model);
}

FadingModel with_mean_power(const FadingModel& model, double omega_x) {
    require(positive(omega_x), "with_mean_power: omega_x must be positive");
    return std::visit(
        [&](auto m) -> FadingModel {
            m.omega_x = omega_x;
            return m;
        },
        model);
}

double pdf(const FadingModel& model, double x, const Tolerance& tol) {
    validate(model);
    require(x > 0.0 && !std::isnan(x), "fading pdf: x must be positive");
    if (std::isinf(x)) return 0.0;
    return std::visit(
        Overloaded{
            [&](const Rayleigh& m) { return std::exp(-x / m.omega_x) / m.omega_x; },
            [&](const NakagamiM& m) { return std::exp(log_gamma_pdf(m.m_f, m.omega_x, x)); },
            [&](const Rician& m) {
                const double k = m.k_r;
                const double y = 2.0 * std::sqrt(k * (1.0 + k) * x / m.omega_x);
                return (1.0 + k) / m.omega_x * std::exp(-k - (1.0 + k) * x / m.omega_x + y) *
                       nm::bessel_i_scaled(0.0, y);
            },
            [&](const Hoyt& m) {
                const double q2 = m.q * m.q;
                const double y = (1.0 - q2 * q2) * x / (4.0 * q2 * m.omega_x);
                return (1.0 + q2) / (2.0 * m.q * m.omega_x) *
                       std::exp(-(1.0 + q2) * (1.0 + q2) * x / (4.0 * q2 * m.omega_x) + y) *
                       nm::bessel_i_scaled(0.0, y);
            },
            [&](const KappaMu& m) {
                const double mu = m.mu;
                const double kap = m.kappa;
                if (kap == 0.0) return std::exp(log_gamma_pdf(mu, m.omega_x, x));
                const double r = x / m.omega_x;
                const double y = 2.0 * mu * std::sqrt(kap * (1.0 + kap) * r);
                const double log_f = std::log(mu) + 0.5 * (mu + 1.0) * std::log1p(kap) -
                                     0.5 * (mu - 1.0) * std::log(kap) - mu * kap - std::log(m.omega_x) +
                                     0.5 * (mu - 1.0) * std::log(r) - mu * (1.0 + kap) * r + y +
                                     std::log(nm::bessel_i_scaled(mu - 1.0, y));
                return std::exp(log_f);
            },
            [&](const EtaMu& m) {
                const double mu = m.mu;
                const double eta = m.eta;
                const double h = (2.0 + 1.0 / eta + eta) / 4.0;
                const double big_h = (1.0 / eta - eta) / 4.0;
                if (big_h == 0.0) return std::exp(log_gamma_pdf(2.0 * mu, m.omega_x, x));
                const double r = x / m.omega_x;
                const double y = 2.0 * mu * big_h * r;
                const double log_f = std::log(2.0 * std::sqrt(std::numbers::pi)) + (mu + 0.5) * std::log(mu) +
                                     mu * std::log(h) - std::lgamma(mu) - (mu - 0.5) * std::log(big_h) -
                                     std::log(m.omega_x) + (mu - 0.5) * std::log(r) - 2.0 * mu * h * r + y +
                                     std::log(nm::bessel_i_scaled(mu - 0.5, y));
                return std::exp(log_f);
            },
            [&](const KappaMuShadowed&) { return mixture_pdf(gamma_mixture(model, tol), x); },
            [&](const TWDP& m) { return twdp_pdf(m, x, tol); },
        },
        model);
}

double cdf(const FadingModel& model, double x, const Tolerance& tol) {
    validate(model);
    require(x >= 0.0 && !std::isnan(x), "fading cdf: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return std::visit(
        Overloaded{
            [&](const Rayleigh& m) { return -std::expm1(-x / m.omega_x); },
            [&](const NakagamiM& m) { return nm::reg_lower_gamma(m.m_f, m.m_f * x / m.omega_x); },
            [&](const Hoyt& m) { return mixture_cdf(two_gamma_sum_mixture(0.5, m.q * m.q, m.omega_x, tol), x); },
            [&](const EtaMu& m) { return mixture_cdf(two_gamma_sum_mixture(m.mu, m.eta, m.omega_x, tol), x); },
            [&](const auto&) { return mixture_cdf(gamma_mixture(model, tol), x); },
        },
        model);
}

bool has_gamma_mixture(const FadingModel& model) {
    return !std::holds_alternative<Hoyt>(model) && !std::holds_alternative<EtaMu>(model);
}

GammaMixture gamma_mixture(const FadingModel& model, const Tolerance& tol) {
    validate(model);
    tol.validate();
    auto single = [](double shape, double omega) {
        GammaMixture mix;
        mix.terms.push_back({1.0, shape, omega});
        return mix;
    };
    return std::visit(
        Overloaded{
            [&](const Rayleigh& m) { return single(1.0, m.omega_x); },
            [&](const NakagamiM& m) { return single(m.m_f, m.omega_x); },
            [&](const Rician& m) {
                const double k = m.k_r;
                return truncate_mixture(
                    std::exp(-k), [&](std::size_t i) { return poisson_log_weight(k, i); },
                    [](std::size_t i) { return i + 1.0; },
                    [&](std::size_t i) { return (i + 1.0) * m.omega_x / (k + 1.0); }, tol);
            },
            [&](const KappaMu& m) {
                const double lambda = m.mu * m.kappa;
                return truncate_mixture(
                    std::exp(-lambda), [&](std::size_t i) { return poisson_log_weight(lambda, i); },
                    [&](std::size_t i) { return m.mu + static_cast<double>(i); },
                    [&](std::size_t i) {
                        return m.omega_x * (m.mu + static_cast<double>(i)) / (m.mu * (1.0 + m.kappa));
                    },
                    tol);
            },
            [&](const KappaMuShadowed& m) {
                const double p = m.mu * m.kappa / (m.mu * m.kappa + m.m_f);
                return truncate_mixture(
                    1.0, [&](std::size_t i) { return negative_binomial_log_weight(m.m_f, p, i); },
                    [&](std::size_t i) { return m.mu + static_cast<double>(i); },
                    [&](std::size_t i) {
                        return m.omega_x * (m.mu + static_cast<double>(i)) / (m.mu * (1.0 + m.kappa));
                    },
                    tol);
            },
            [&](const TWDP& m) {
                const double k = m.k_r;
                TwdpWeights weights(k, m.delta, tol);
                return truncate_mixture(
                    std::exp(-k),
                    [&](std::size_t j) { return poisson_log_weight(k, j) + weights.log_reduced(j); },
                    [](std::size_t j) { return j + 1.0; },
                    [&](std::size_t j) { return (j + 1.0) * m.omega_x / (k + 1.0); }, tol);
            },
            [&](const auto&) -> GammaMixture {
                throw UnsupportedError("gamma_mixture: no gamma mixture for " + name(model));
            },
        },
        model);
}

TailParams tail_params(const FadingModel& model) {
    validate(model);
    return std::visit(Overloaded{
                          [](const Rayleigh&) { return TailParams{1.0, 0.0}; },
                          [](const NakagamiM& m) {
                              return TailParams{std::exp(m.m_f * std::log(m.m_f) - std::lgamma(m.m_f)),
                                                m.m_f - 1.0};
                          },
                          [](const TWDP& m) {
                              const double k = m.k_r;
                              return TailParams{(1.0 + k) * std::exp(-k) * nm::bessel_i(0.0, k * m.delta), 0.0};
                          },
                          [&](const auto&) { return numeric_tail(model); },
                      },
                      model);
}

TwdpPhysical twdp_physical(const TWDP& model) {
    validate(model);
    const double sigma2 = model.omega_x / (2.0 * (1.0 + model.k_r));
    const double root = std::sqrt(std::max(0.0, 1.0 - model.delta * model.delta));
    return {std::sqrt(sigma2 * model.k_r * (1.0 + root)), std::sqrt(sigma2 * model.k_r * (1.0 - root)), sigma2};
}

std::vector<double> sample(const FadingModel& model, std::size_t count, std::uint64_t seed) {
    validate(model);
    std::vector<double> out(count);
    random::ChunkFiller filler = std::visit(
        Overloaded{
            [](const Rayleigh& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    std::exponential_distribution<double> d(1.0 / m.omega_x);
                    for (double& x : chunk) x = d(e);
                };
            },
            [](const NakagamiM& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    std::gamma_distribution<double> d(m.m_f, m.omega_x / m.m_f);
                    for (double& x : chunk) x = d(e);
                };
            },
            [](const Rician& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    const double sigma = std::sqrt(m.omega_x / (2.0 * (1.0 + m.k_r)));
                    const double los = std::sqrt(m.k_r * m.omega_x / (1.0 + m.k_r));
                    std::normal_distribution<double> n(0.0, sigma);
                    for (double& x : chunk) {
                        const double re = los + n(e);
                        const double im = n(e);
                        x = re * re + im * im;
                    }
                };
            },
            [](const Hoyt& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    const double q2 = m.q * m.q;
                    std::normal_distribution<double> nx(0.0, std::sqrt(m.omega_x / (1.0 + q2)));
                    std::normal_distribution<double> ny(0.0, std::sqrt(q2 * m.omega_x / (1.0 + q2)));
                    for (double& x : chunk) {
                        const double a = nx(e);
                        const double b = ny(e);
                        x = a * a + b * b;
                    }
                };
            },
            [](const KappaMu& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    const double lambda = m.mu * m.kappa;
                    const double theta = m.omega_x / (m.mu * (1.0 + m.kappa));
                    for (double& x : chunk) {
                        long i = 0;
                        if (lambda > 0.0) i = std::poisson_distribution<long>(lambda)(e);
                        x = std::gamma_distribution<double>(m.mu + static_cast<double>(i), theta)(e);
                    }
                };
            },
            [](const EtaMu& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    // In-phase and quadrature cluster powers, each a gamma with shape mu.
                    const double theta_x = m.omega_x * m.eta / (m.mu * (1.0 + m.eta));
                    const double theta_y = m.omega_x / (m.mu * (1.0 + m.eta));
                    std::gamma_distribution<double> gx(m.mu, theta_x);
                    std::gamma_distribution<double> gy(m.mu, theta_y);
                    for (double& x : chunk) x = gx(e) + gy(e);
                };
            },
            [](const KappaMuShadowed& m) -> random::ChunkFiller {
                return [m](random::Engine& e, std::span<double> chunk) {
                    // Negative-binomial index as a Poisson with gamma-distributed mean.
                    const double lambda_scale = m.mu * m.kappa / m.m_f;
                    const double theta = m.omega_x / (m.mu * (1.0 + m.kappa));
                    std::gamma_distribution<double> g(m.m_f, 1.0);
                    for (double& x : chunk) {
                        const double lambda = lambda_scale * g(e);
                        long i = 0;
                        if (lambda > 0.0) i = std::poisson_distribution<long>(lambda)(e);
                        x = std::gamma_distribution<double>(m.mu + static_cast<double>(i), theta)(e);
                    }
                };
            },
            [](const TWDP& m) -> random::ChunkFiller {
                const TwdpPhysical phys = twdp_physical(m);
                return [phys](random::Engine& e, std::span<double> chunk) {
                    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
                    std::normal_distribution<double> n(0.0, std::sqrt(phys.sigma2));
                    for (double& x : chunk) {
                        const double p1 = phase(e);
                        const double p2 = phase(e);
                        const double re = phys.v1 * std::cos(p1) + phys.v2 * std::cos(p2) + n(e);
                        const double im = phys.v1 * std::sin(p1) + phys.v2 * std::sin(p2) + n(e);
                        x = re * re + im * im;
                    }
                };
            },
        },
        model);
    random::fill_chunked(out, seed, random::Stream::Fading, filler);
    return out;
}

}  // namespace igfade::fading
