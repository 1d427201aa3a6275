#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace igfade {

/// ln Y ~ Normal(mu, sigma^2).
struct Lognormal {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Gamma with shape k and mean omega.
struct GammaSh {
    double k = 1.0;
    double omega = 1.0;
};

/// Inverse Gaussian with mean mu_i and shape lambda.
struct InverseGaussian {
    double mu_i = 1.0;
    double lambda = 1.0;
};

/// Inverse gamma with shape m > 1 and mean omega_i.
struct InverseGamma {
    double m = 2.0;
    double omega_i = 1.0;
};

using ShadowingModel = std::variant<Lognormal, GammaSh, InverseGaussian, InverseGamma>;

enum class ShadowingFamily { Lognormal, Gamma, InverseGaussian, InverseGamma };

ShadowingFamily family_of(const ShadowingModel& model);
std::string family_name(ShadowingFamily family);

namespace shadowing {

/// Throws DomainError when a field is outside its range (m <= 1 included).
void validate(const ShadowingModel& model);

double cdf(const ShadowingModel& model, double y);
/// Density in y. Every family has one, though only gamma and inverse gamma
/// feed the composite machinery.
double pdf(const ShadowingModel& model, double y);
/// cdf(model, e^t): the theoretical CDF against natural-log data.
double log_domain_cdf(const ShadowingModel& model, double t);

/// Inverse-gamma draws as reciprocals of gamma draws with E[1/G] = omega_i.
std::vector<double> sample_inverse_gamma(double m, double omega_i, std::size_t count,
                                         std::uint64_t seed);

}  // namespace shadowing
}  // namespace igfade
