#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "igfade/errors.hpp"
#include "igfade/shadowing.hpp"
#include "oracles.hpp"

using namespace igfade;

namespace {

double sup_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

const ShadowingModel kModels[] = {Lognormal{0.3, 0.8}, GammaSh{2.5, 1.4}, InverseGaussian{1.2, 3.0},
                                  InverseGamma{3.3, 0.9}, InverseGamma{1.18, 4.6}};

}  // namespace

TEST(ShadowingCdf, Examples) {
    EXPECT_NEAR(shadowing::cdf(Lognormal{0.7, 1.1}, std::exp(0.7)), 0.5, 1e-15);
    EXPECT_NEAR(shadowing::cdf(GammaSh{1.0, 2.0}, 2.0), 1.0 - std::exp(-1.0), 1e-14);
    EXPECT_NEAR(shadowing::cdf(InverseGamma{2.0, 1.0}, 1.0), 2.0 * std::exp(-1.0), 1e-14);
}

TEST(ShadowingCdf, InverseGaussianClosedForm) {
    // Phi(sqrt(l/y)(y/mu-1)) + e^{2l/mu} Phi(-sqrt(l/y)(y/mu+1)) written out with erfc.
    const double mu = 1.2, lambda = 3.0, y = 0.8;
    const double r = std::sqrt(lambda / y);
    const double want = 0.5 * std::erfc(-r * (y / mu - 1.0) / std::sqrt(2.0)) +
                        std::exp(2.0 * lambda / mu) * 0.5 * std::erfc(r * (y / mu + 1.0) / std::sqrt(2.0));
    EXPECT_NEAR(shadowing::cdf(InverseGaussian{mu, lambda}, y), want, 1e-13);
}

TEST(ShadowingPdf, Examples) {
    EXPECT_NEAR(shadowing::pdf(GammaSh{1.0, 1.0}, 0.5), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(shadowing::pdf(InverseGamma{2.0, 1.0}, 1.0), std::exp(-1.0), 1e-15);
}

TEST(ShadowingPdf, CdfIsIntegralOfPdf) {
    for (const auto& model : kModels) {
        for (double y : {0.2, 0.9, 2.5}) {
            // Substitute y = e^t so the lower tail is finite; the integrand vanishes below t = -40.
            const double integral = oracle::simpson(
                [&](double t) { return shadowing::pdf(model, std::exp(t)) * std::exp(t); }, -40.0,
                std::log(y), 40000);
            EXPECT_NEAR(integral, shadowing::cdf(model, y), 1e-8) << family_name(family_of(model)) << " y=" << y;
        }
    }
}

TEST(ShadowingPdf, InverseGammaNormalized) {
    const InverseGamma ig{2.4, 1.7};
    const double total = oracle::simpson(
        [&](double t) { return shadowing::pdf(ig, std::exp(t)) * std::exp(t); }, -40.0, 60.0, 200000);
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(ShadowingCdf, MonotoneWithLimits) {
    for (const auto& model : kModels) {
        double prev = 0.0;
        for (double t = -20.0; t <= 20.0; t += 0.25) {
            const double f = shadowing::cdf(model, std::exp(t));
            EXPECT_GE(f, prev);
            prev = f;
        }
        EXPECT_LE(shadowing::cdf(model, 1e-12), 1e-10);
        EXPECT_GE(shadowing::cdf(model, 1e12), 1.0 - 1e-10);
    }
}

TEST(ShadowingCdf, LogDomainMatches) {
    for (const auto& model : kModels) {
        for (double t : {-3.0, -0.4, 0.0, 1.1, 4.0}) {
            EXPECT_NEAR(shadowing::log_domain_cdf(model, t), shadowing::cdf(model, std::exp(t)), 1e-14);
        }
    }
    EXPECT_NEAR(shadowing::log_domain_cdf(Lognormal{0.0, 0.4}, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(shadowing::log_domain_cdf(InverseGamma{2.0, 1.0}, 0.0), 0.7357588823428847, 1e-14);
    EXPECT_EQ(shadowing::log_domain_cdf(GammaSh{2.0, 1.0}, -800.0), 0.0);
    EXPECT_EQ(shadowing::log_domain_cdf(GammaSh{2.0, 1.0}, 800.0), 1.0);
}

TEST(ShadowingValidate, RejectsBadParameters) {
    EXPECT_THROW(shadowing::validate(InverseGamma{1.0, 1.0}), DomainError);
    EXPECT_THROW(shadowing::validate(InverseGamma{0.5, 1.0}), DomainError);
    EXPECT_THROW(shadowing::validate(GammaSh{0.0, 1.0}), DomainError);
    EXPECT_THROW(shadowing::validate(Lognormal{0.0, -1.0}), DomainError);
    EXPECT_THROW(shadowing::validate(InverseGaussian{1.0, 0.0}), DomainError);
    EXPECT_THROW(shadowing::cdf(GammaSh{1.0, 1.0}, 0.0), DomainError);
    EXPECT_THROW(shadowing::pdf(GammaSh{1.0, 1.0}, -1.0), DomainError);
    EXPECT_THROW(shadowing::sample_inverse_gamma(1.0, 1.0, 10, 1), DomainError);
}

TEST(InverseGammaSampling, MeanAndDistribution) {
    const std::size_t n = 1'000'000;
    const auto xs = shadowing::sample_inverse_gamma(5.0, 1.0, n, 2024);
    ASSERT_EQ(xs.size(), n);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    // Var = Omega^2 / (m - 2) for the unit-mean inverse gamma.
    const double stderr_mean = std::sqrt(1.0 / 3.0 / n);
    EXPECT_NEAR(mean, 1.0, 3.0 * stderr_mean);
    const double d = sup_distance(xs, [](double y) { return shadowing::cdf(InverseGamma{5.0, 1.0}, y); });
    EXPECT_LT(d, 0.002);
}

TEST(InverseGammaSampling, Deterministic) {
    EXPECT_EQ(shadowing::sample_inverse_gamma(3.0, 2.0, 200000, 7),
              shadowing::sample_inverse_gamma(3.0, 2.0, 200000, 7));
    EXPECT_NE(shadowing::sample_inverse_gamma(3.0, 2.0, 1000, 7),
              shadowing::sample_inverse_gamma(3.0, 2.0, 1000, 8));
}

TEST(InverseGammaSampling, ReciprocalIsGamma) {
    // 1/xi for xi ~ IG(m, Omega_i) is Gamma(shape m, mean m / ((m - 1) Omega_i)).
    const double m = 4.2, omega_i = 1.3;
    const std::size_t n = 100'000;
    auto xs = shadowing::sample_inverse_gamma(m, omega_i, n, 99);
    for (auto& x : xs) x = 1.0 / x;
    std::sort(xs.begin(), xs.end());
    const GammaSh dual{m, m / ((m - 1.0) * omega_i)};
    double t = 1.0 / (12.0 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = shadowing::cdf(dual, xs[i]) - (2.0 * i + 1.0) / (2.0 * n);
        t += e * e;
    }
    EXPECT_LT(t, 0.743);  // 1% critical value of the Cramer-von Mises statistic
}
