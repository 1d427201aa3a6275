#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "igfade/errors.hpp"
#include "igfade/fading.hpp"
#include "oracles.hpp"

using namespace igfade;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Case {
    FadingModel model;
    std::function<double(double)> density;  // independent oracle
};

std::vector<Case> cases() {
    return {
        {Rayleigh{1.3}, [](double x) { return std::exp(-x / 1.3) / 1.3; }},
        {Rician{3.0, 1.3}, [](double x) { return oracle::rician_pdf(3.0, 1.3, x); }},
        {NakagamiM{2.5, 1.3}, [](double x) { return oracle::nakagami_pdf(2.5, 1.3, x); }},
        {Hoyt{0.5, 1.3}, [](double x) { return oracle::hoyt_pdf(0.5, 1.3, x); }},
        {KappaMu{2.0, 1.5, 1.3}, [](double x) { return oracle::kappa_mu_pdf(2.0, 1.5, 1.3, x); }},
        {EtaMu{0.4, 1.2, 1.3}, [](double x) { return oracle::eta_mu_pdf(0.4, 1.2, 1.3, x); }},
        {KappaMuShadowed{2.0, 1.5, 3.0, 1.3},
         [](double x) { return oracle::kappa_mu_shadowed_pdf(2.0, 1.5, 3.0, 1.3, x); }},
        {TWDP{4.0, 0.9, 1.0}, [](double x) { return oracle::twdp_pdf(4.0, 0.9, 1.0, x); }},
    };
}

oracle::LogGrid grid_for(const Case& c) { return oracle::LogGrid(c.density, -40.0, std::log(200.0), 24000); }

// E[X^p e^{sX}] by brute-force quadrature of the oracle density.
double gmgf_by_quadrature(const oracle::LogGrid& grid, double p, double s) {
    return grid.integrate([&](double x) { return std::pow(x, p) * std::exp(s * x); });
}

}  // namespace

TEST(FadingGmgf, Examples) {
    EXPECT_NEAR(fading::gmgf(Rayleigh{1.0}, 1.0, 0.0), 1.0, 1e-14);
    EXPECT_NEAR(fading::gmgf(Rayleigh{1.0}, 0.0, -1.0), 0.5, 1e-14);
}

TEST(FadingPdf, MatchesTextbookForms) {
    for (const auto& c : cases()) {
        for (double x : {0.01, 0.3, 1.0, 2.2, 6.0}) {
            EXPECT_LT(rel_err(fading::pdf(c.model, x), c.density(x)), 1e-9) << fading::name(c.model) << " x=" << x;
        }
    }
}

TEST(FadingPdf, Examples) {
    EXPECT_NEAR(fading::pdf(Rayleigh{1.0}, 1.0), std::exp(-1.0), 1e-15);
    for (double x : {0.1, 0.7, 3.0}) {
        EXPECT_NEAR(fading::pdf(TWDP{0.0, 0.6, 1.0}, x), std::exp(-x), 1e-14);
    }
}

TEST(FadingGmgf, ClosedFormsMatchQuadrature) {
    for (const auto& c : cases()) {
        const oracle::LogGrid grid = grid_for(c);
        for (double p : {0.5, 1.0, 2.0, 3.7}) {
            for (double s : {-0.1, -1.0, -10.0}) {
                const double want = gmgf_by_quadrature(grid, p, s);
                EXPECT_LT(rel_err(fading::gmgf(c.model, p, s), want), 1e-7)
                    << fading::name(c.model) << " p=" << p << " s=" << s;
                EXPECT_LT(rel_err(std::exp(fading::log_gmgf(c.model, p, s)), want), 1e-7);
            }
        }
    }
}

TEST(FadingGmgf, TwdpIntegerOrderMatchesQuadrature) {
    const Case c{TWDP{4.0, 0.9, 1.0}, [](double x) { return oracle::twdp_pdf(4.0, 0.9, 1.0, x); }};
    const oracle::LogGrid grid = grid_for(c);
    EXPECT_LT(rel_err(fading::gmgf(c.model, 2.0, -1.5), gmgf_by_quadrature(grid, 2.0, -1.5)), 1e-7);
    for (int p : {0, 1, 3, 5}) {
        EXPECT_LT(rel_err(fading::gmgf(c.model, p, -0.7), gmgf_by_quadrature(grid, p, -0.7)), 1e-7) << "p=" << p;
    }
}

TEST(FadingGmgf, NumericFallbackAgrees) {
    for (const auto& c : cases()) {
        const Estimate e = fading::gmgf_numeric(c.model, 1.7, -0.8);
        EXPECT_LT(rel_err(e.value, fading::gmgf(c.model, 1.7, -0.8)), 1e-8) << fading::name(c.model);
    }
}

TEST(FadingGmgf, MomentsMatchQuadrature) {
    for (const auto& c : cases()) {
        const oracle::LogGrid grid = grid_for(c);
        for (double p : {0.0, 1.0, 2.0}) {
            const double want = gmgf_by_quadrature(grid, p, 0.0);
            EXPECT_LT(rel_err(fading::gmgf(c.model, p, 0.0), want), 1e-7) << fading::name(c.model) << " p=" << p;
        }
        EXPECT_NEAR(fading::gmgf(c.model, 1.0, 0.0), fading::mean_power(c.model), 1e-10);
    }
}

TEST(FadingGmgf, IntegerOrderIsMgfDerivative) {
    // Richardson-extrapolated central differences of the MGF.
    const double h = 1e-4;
    for (const auto& c : cases()) {
        auto mgf = [&](double s) { return fading::gmgf(c.model, 0.0, s); };
        const double s = -0.6;
        auto d1 = [&](double step) { return (mgf(s + step) - mgf(s - step)) / (2.0 * step); };
        auto d2 = [&](double step) { return (mgf(s + step) - 2.0 * mgf(s) + mgf(s - step)) / (step * step); };
        const double first = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
        const double second = (4.0 * d2(10.0 * h / 2.0) - d2(10.0 * h)) / 3.0;
        EXPECT_LT(rel_err(fading::gmgf(c.model, 1.0, s), first), 1e-4) << fading::name(c.model);
        EXPECT_LT(rel_err(fading::gmgf(c.model, 2.0, s), second), 1e-4) << fading::name(c.model);
    }
}

TEST(FadingGmgf, HierarchyCollapses) {
    for (double p : {0.0, 0.5, 2.0, 3.7}) {
        for (double s : {-0.1, -1.0, -10.0}) {
            auto same = [&](const FadingModel& a, const FadingModel& b) {
                EXPECT_LT(rel_err(fading::gmgf(a, p, s), fading::gmgf(b, p, s)), 1e-9)
                    << fading::name(a) << " vs " << fading::name(b) << " p=" << p << " s=" << s;
            };
            same(KappaMuShadowed{0.0, 1.7, 2.5, 1.2}, NakagamiM{1.7, 1.2});
            same(KappaMu{2.5, 1.0, 1.2}, Rician{2.5, 1.2});
            same(Hoyt{1.0, 1.2}, Rayleigh{1.2});
            same(TWDP{2.5, 0.0, 1.2}, Rician{2.5, 1.2});
        }
    }
    for (double x : {0.1, 0.9, 2.5}) {
        EXPECT_LT(rel_err(fading::pdf(TWDP{2.5, 0.0, 1.2}, x), fading::pdf(Rician{2.5, 1.2}, x)), 1e-10);
    }
}

TEST(FadingPdf, IntegratesToOne) {
    for (const auto& c : cases()) {
        const double total = oracle::integrate_log([&](double x) { return fading::pdf(c.model, x); }, -40.0,
                                                   std::log(200.0), 20000);
        EXPECT_NEAR(total, 1.0, 1e-8) << fading::name(c.model);
    }
}

TEST(FadingCdf, IsIntegralOfPdf) {
    for (const auto& c : cases()) {
        for (double x : {0.05, 0.8, 3.0}) {
            const double want = oracle::integrate_log(c.density, -40.0, std::log(x), 4000);
            EXPECT_NEAR(fading::cdf(c.model, x), want, 1e-9) << fading::name(c.model) << " x=" << x;
        }
    }
}

TEST(GammaMixture, SingleTermAndPoissonCases) {
    const GammaMixture nak = fading::gamma_mixture(NakagamiM{2.5, 1.7});
    ASSERT_EQ(nak.terms.size(), 1u);
    EXPECT_EQ(nak.terms[0].weight * nak.prefactor, 1.0);
    EXPECT_EQ(nak.terms[0].shape, 2.5);
    EXPECT_EQ(nak.terms[0].omega, 1.7);

    const double k = 3.0;
    const GammaMixture twdp = fading::gamma_mixture(TWDP{k, 0.0, 1.0});
    EXPECT_NEAR(twdp.prefactor, std::exp(-k), 1e-15);
    double factorial = 1.0;
    for (std::size_t j = 0; j < 15; ++j) {
        if (j > 0) factorial *= static_cast<double>(j);
        EXPECT_NEAR(twdp.terms[j].weight, std::pow(k, j) / factorial, 1e-12 * std::pow(k, j) / factorial);
        EXPECT_EQ(twdp.terms[j].shape, j + 1.0);
    }
}

TEST(GammaMixture, KappaMuShadowedWeightMass) {
    Tolerance tol;
    tol.rel_tol = 1e-14;
    const GammaMixture mix = fading::gamma_mixture(KappaMuShadowed{2.0, 1.5, 3.0, 1.0}, tol);
    oracle::CompensatedSum mass;
    for (std::size_t i = 0; i < std::min<std::size_t>(200, mix.terms.size()); ++i) mass.add(mix.terms[i].weight);
    const double eps = 1.0 - static_cast<double>(mass.value()) * mix.prefactor;
    EXPECT_GE(eps, -1e-14);
    EXPECT_LT(eps, 1e-10);
}

TEST(GammaMixture, ReconstructsPdf) {
    for (const auto& c : cases()) {
        if (!fading::has_gamma_mixture(c.model)) continue;
        const GammaMixture mix = fading::gamma_mixture(c.model);
        const double omega = fading::mean_power(c.model);
        EXPECT_LT(mix.truncation_error_bound, 1e-10);
        for (double x = 0.01 * omega; x <= 10.0 * omega; x *= 1.2) {
            oracle::CompensatedSum sum;
            for (const auto& t : mix.terms) sum.add(t.weight * oracle::nakagami_pdf(t.shape, t.omega, x));
            EXPECT_NEAR(static_cast<double>(sum.value()) * mix.prefactor, c.density(x), 1e-6)
                << fading::name(c.model) << " x=" << x;
        }
    }
}

TEST(GammaMixture, UnsupportedFamilies) {
    EXPECT_FALSE(fading::has_gamma_mixture(Hoyt{0.5, 1.0}));
    EXPECT_FALSE(fading::has_gamma_mixture(EtaMu{0.5, 1.0, 1.0}));
    EXPECT_THROW(fading::gamma_mixture(Hoyt{0.5, 1.0}), UnsupportedError);
    EXPECT_THROW(fading::gamma_mixture(EtaMu{0.5, 1.0, 1.0}), UnsupportedError);
}

TEST(TailParams, ClosedForms) {
    const TailParams ray = fading::tail_params(Rayleigh{2.0});
    EXPECT_EQ(ray.alpha, 1.0);
    EXPECT_EQ(ray.beta, 0.0);
    const TailParams twdp0 = fading::tail_params(TWDP{0.0, 0.4, 1.0});
    EXPECT_NEAR(twdp0.alpha, 1.0, 1e-15);
    EXPECT_EQ(twdp0.beta, 0.0);
    const TailParams twdp = fading::tail_params(TWDP{4.0, 0.9, 1.0});
    EXPECT_NEAR(twdp.alpha, 5.0 * std::exp(-4.0) * oracle::bessel_i(0.0, 3.6), 1e-12);
}

TEST(TailParams, PowerLawMatchesSmallArgumentCdf) {
    for (const auto& c : cases()) {
        const TailParams tp = fading::tail_params(c.model);
        const double omega = fading::mean_power(c.model);
        const double x = 1e-6 * omega;
        const double law = tp.alpha / (tp.beta + 1.0) * std::pow(x / omega, tp.beta + 1.0);
        EXPECT_NEAR(fading::cdf(c.model, x) / law, 1.0, 1e-3) << fading::name(c.model);
    }
    const TailParams nak = fading::tail_params(NakagamiM{2.0, 1.0});
    EXPECT_NEAR(nak.beta, 1.0, 1e-12);
    EXPECT_NEAR(nak.alpha, 4.0, 1e-12);
}

TEST(TwdpPhysical, Inversion) {
    const TwdpPhysical ph = fading::twdp_physical(TWDP{4.0, 1.0, 1.0});
    EXPECT_EQ(ph.v1, ph.v2);
    const TwdpPhysical q = fading::twdp_physical(TWDP{4.0, 0.6, 2.0});
    EXPECT_GE(q.v1, q.v2);
    const double spec = q.v1 * q.v1 + q.v2 * q.v2;
    EXPECT_NEAR(spec / (2.0 * q.sigma2), 4.0, 1e-12);
    EXPECT_NEAR(2.0 * q.v1 * q.v2 / spec, 0.6, 1e-12);
    EXPECT_NEAR(spec + 2.0 * q.sigma2, 2.0, 1e-12);
}

TEST(FadingSample, TwdpMean) {
    const std::size_t n = 1'000'000;
    const auto xs = fading::sample(TWDP{4.0, 0.9, 1.0}, n, 5);
    double mean = 0.0, sq = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    for (double x : xs) sq += (x - mean) * (x - mean);
    const double se = std::sqrt(sq / (n - 1.0) / n);
    EXPECT_NEAR(mean, 1.0, 3.0 * se);
}

TEST(FadingSample, MatchesCdf) {
    const std::size_t n = 1'000'000;
    for (const FadingModel& model :
         {FadingModel{Rician{4.0, 1.0}}, FadingModel{KappaMuShadowed{2.0, 1.5, 3.0, 1.0}},
          FadingModel{NakagamiM{2.5, 0.7}}, FadingModel{TWDP{4.0, 0.9, 1.0}}}) {
        auto xs = fading::sample(model, n, 17);
        std::sort(xs.begin(), xs.end());
        double d = 0.0;
        // Every 50th order statistic is enough to resolve a 2e-3 distance.
        for (std::size_t i = 0; i < n; i += 50) {
            const double f = fading::cdf(model, xs[i]);
            d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
        }
        EXPECT_LT(d, 0.002) << fading::name(model);
    }
}

TEST(FadingSample, Deterministic) {
    EXPECT_EQ(fading::sample(Rician{2.0, 1.0}, 100000, 3), fading::sample(Rician{2.0, 1.0}, 100000, 3));
    EXPECT_NE(fading::sample(Rician{2.0, 1.0}, 100, 3), fading::sample(Rician{2.0, 1.0}, 100, 4));
}

TEST(FadingValidate, RejectsBadParameters) {
    EXPECT_THROW(fading::validate(Rayleigh{0.0}), DomainError);
    EXPECT_THROW(fading::validate(Rician{-1.0, 1.0}), DomainError);
    EXPECT_THROW(fading::validate(NakagamiM{0.4, 1.0}), DomainError);
    EXPECT_THROW(fading::validate(Hoyt{1.5, 1.0}), DomainError);
    EXPECT_THROW(fading::validate(Hoyt{0.0, 1.0}), DomainError);
    EXPECT_THROW(fading::validate(EtaMu{1.2, 1.0, 1.0}), DomainError);
    EXPECT_THROW(fading::validate(TWDP{1.0, 1.2, 1.0}), DomainError);
    EXPECT_THROW(fading::gmgf(Rayleigh{1.0}, -1.0, -1.0), DomainError);
    EXPECT_THROW(fading::gmgf(Rayleigh{1.0}, 1.0, 0.5), DomainError);
    EXPECT_THROW(fading::pdf(Rayleigh{1.0}, -1.0), DomainError);
}
