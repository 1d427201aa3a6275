#include "igfade/shadowing.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "detail/common.hpp"
#include "igfade/errors.hpp"
#include "igfade/numerics.hpp"
#include "igfade/random.hpp"

namespace igfade {

namespace {

using detail::Overloaded;
using detail::positive;
using detail::require;

// Standard normal CDF, accurate in the lower tail.
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// log Phi(-x) for x >= 0, without underflow for large x.
double log_normal_upper_tail(double x) {
    if (x < 37.0) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
    const double inv2 = 1.0 / (x * x);
    return -0.5 * x * x - std::log(x * std::sqrt(2.0 * std::numbers::pi)) +
           std::log1p(-inv2 + 3.0 * inv2 * inv2);
}

}  // namespace

ShadowingFamily family_of(const ShadowingModel& model) {
    return std::visit(Overloaded{
                          [](const Lognormal&) { return ShadowingFamily::Lognormal; },
                          [](const GammaSh&) { return ShadowingFamily::Gamma; },
                          [](const InverseGaussian&) { return ShadowingFamily::InverseGaussian; },
                          [](const InverseGamma&) { return ShadowingFamily::InverseGamma; },
                      },
                      model);
}

std::string family_name(ShadowingFamily family) {
    switch (family) {
        case ShadowingFamily::Lognormal: return "lognormal";
        case ShadowingFamily::Gamma: return "gamma";
        case ShadowingFamily::InverseGaussian: return "inverse-gaussian";
        case ShadowingFamily::InverseGamma: return "inverse-gamma";
    }
    return "unknown";
}

namespace shadowing {

void validate(const ShadowingModel& model) {
    std::visit(Overloaded{
                   [](const Lognormal& p) {
                       require(std::isfinite(p.mu), "lognormal: mu must be finite");
                       require(positive(p.sigma), "lognormal: sigma must be positive");
                   },
                   [](const GammaSh& p) {
                       require(positive(p.k), "gamma: k must be positive");
                       require(positive(p.omega), "gamma: omega must be positive");
                   },
                   [](const InverseGaussian& p) {
                       require(positive(p.mu_i), "inverse gaussian: mu_i must be positive");
                       require(positive(p.lambda), "inverse gaussian: lambda must be positive");
                   },
                   [](const InverseGamma& p) {
                       require(p.m > 1.0 && std::isfinite(p.m), "inverse gamma: m must exceed 1");
                       require(positive(p.omega_i), "inverse gamma: omega_i must be positive");
                   },
               },
               model);
}

double cdf(const ShadowingModel& model, double y) {
    validate(model);
    require(y > 0.0, "shadowing cdf: y must be positive");
    return std::visit(
        Overloaded{
            [&](const Lognormal& p) { return normal_cdf((std::log(y) - p.mu) / p.sigma); },
            [&](const GammaSh& p) { return numerics::reg_lower_gamma(p.k, p.k * y / p.omega); },
            [&](const InverseGaussian& p) {
                const double root = std::sqrt(p.lambda / y);
                const double lower = normal_cdf(root * (y / p.mu_i - 1.0));
                const double upper =
                    std::exp(2.0 * p.lambda / p.mu_i + log_normal_upper_tail(root * (y / p.mu_i + 1.0)));
                return std::min(1.0, lower + upper);
            },
            [&](const InverseGamma& p) {
                return numerics::reg_upper_gamma(p.m, p.omega_i * (p.m - 1.0) / y);
            },
        },
        model);
}

double pdf(const ShadowingModel& model, double y) {
    validate(model);
    require(y > 0.0, "shadowing pdf: y must be positive");
    const double log_y = std::log(y);
    const double log_density = std::visit(
        Overloaded{
            [&](const Lognormal& p) {
                const double z = (log_y - p.mu) / p.sigma;
                return -0.5 * z * z - log_y - std::log(p.sigma * std::sqrt(2.0 * std::numbers::pi));
            },
            [&](const GammaSh& p) {
                const double rate = p.k / p.omega;
                return p.k * std::log(rate) - std::lgamma(p.k) + (p.k - 1.0) * log_y - rate * y;
            },
            [&](const InverseGaussian& p) {
                const double d = y - p.mu_i;
                return 0.5 * (std::log(p.lambda / (2.0 * std::numbers::pi)) - 3.0 * log_y) -
                       p.lambda * d * d / (2.0 * p.mu_i * p.mu_i * y);
            },
            [&](const InverseGamma& p) {
                const double scale = p.omega_i * (p.m - 1.0);
                return p.m * std::log(scale) - std::lgamma(p.m) - (p.m + 1.0) * log_y - scale / y;
            },
        },
        model);
    return std::exp(log_density);
}

double log_domain_cdf(const ShadowingModel& model, double t) {
    if (const auto* ln = std::get_if<Lognormal>(&model)) {
        validate(model);
        return normal_cdf((t - ln->mu) / ln->sigma);
    }
    const double y = std::exp(t);
    if (y == 0.0) {
        validate(model);
        return 0.0;
    }
    if (std::isinf(y)) {
        validate(model);
        return 1.0;
    }
    return cdf(model, y);
}

std::vector<double> sample_inverse_gamma(double m, double omega_i, std::size_t count,
                                         std::uint64_t seed) {
    validate(InverseGamma{m, omega_i});
    std::vector<double> out(count);
    const double scale = (m - 1.0) * omega_i;
    random::fill_chunked(out, seed, random::Stream::Shadowing,
                         [&](random::Engine& engine, std::span<double> chunk) {
                             std::gamma_distribution<double> gamma(m, 1.0);
                             for (double& x : chunk) x = scale / gamma(engine);
                         });
    return out;
}

}  // namespace shadowing
}  // namespace igfade
