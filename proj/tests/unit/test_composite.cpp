#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "igfade/composite.hpp"
#include "igfade/errors.hpp"
#include "oracles.hpp"

using namespace igfade;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Density of G = 1/xi, xi ~ IG(m, mean 1): gamma with shape m and scale 1/(m-1).
double inverse_shadowing_pdf(double m, double g) {
    return std::exp(m * std::log(m - 1.0) + (m - 1.0) * std::log(g) - (m - 1.0) * g - std::lgamma(m));
}

// Direct averaging over the baseline: with x tabulated once from the oracle density,
//   f_W(u) = E[f_xi(u / (w x)) / (w x)],   F_W(u) = E[P(G >= x w / u)],
// where xi ~ IG(m, mean 1) and G = 1/xi.
struct DirectAverage {
    DirectAverage(double m_, double w_bar_, const std::function<double(double)>& density)
        : m(m_), w_bar(w_bar_), grid(density, -40.0, std::log(200.0), 8000) {}

    double pdf(double u) const {
        return grid.integrate([&](double x) {
            const double y = u / (w_bar * x);
            return std::exp(m * std::log(m - 1.0) - (m + 1.0) * std::log(y) - (m - 1.0) / y - std::lgamma(m)) /
                   (w_bar * x);
        });
    }
    double cdf(double u) const {
        return grid.integrate([&](double x) {
            const double lo = std::log(x * w_bar / u);
            if (lo > 6.0) return 0.0;
            return oracle::simpson(
                [&](double t) { return inverse_shadowing_pdf(m, std::exp(t)) * std::exp(t); }, lo, 6.0, 600);
        });
    }

    double m;
    double w_bar;
    oracle::LogGrid grid;
};

const Strategy kExplicit[] = {Strategy::GmgfGeneral, Strategy::GmgfInteger, Strategy::Mixture,
                              Strategy::NumericOracle};

}  // namespace

TEST(FDistribution, Examples) {
    EXPECT_NEAR(composite::f_pdf({2.0, 1.0, 1.0}, 1.0), 0.25, 1e-15);
    EXPECT_NEAR(composite::f_cdf({2.0, 1.0, 1.0}, 1.0), 0.75, 1e-15);
    EXPECT_EQ(composite::f_cdf({2.0, 1.0, 1.0}, INFINITY), 1.0);
    EXPECT_LT(composite::f_pdf({3.0, 2.5, 1.0}, 1e-12), 1e-15);
    EXPECT_GT(composite::f_cdf({3.0, 2.0, 1.0}, 1e12), 1.0 - 1e-12);
}

TEST(FDistribution, PdfNormalizedAndCdfIsItsIntegral) {
    const FDistParams p{3.5, 2.2, 1.0};
    EXPECT_NEAR(oracle::integrate_log([&](double t) { return composite::f_pdf(p, t); }, -40.0, 40.0, 40000), 1.0,
                1e-10);
    // Mean of the F convention used here is omega.
    EXPECT_NEAR(oracle::integrate_log([&](double t) { return t * composite::f_pdf(p, t); }, -40.0, 40.0, 40000), 1.0,
                1e-8);
    for (double t : {0.01, 0.3, 1.0, 4.0, 30.0}) {
        const double want = oracle::integrate_log([&](double x) { return composite::f_pdf(p, x); }, -40.0, std::log(t),
                                                  20000);
        EXPECT_NEAR(composite::f_cdf(p, t), want, 1e-9) << "t=" << t;
    }
}

TEST(FDistribution, LargeShapeCdfStaysAccurate) {
    // m = 1000, k = 1: F(t) = 1 - (1 + t/(m-1))^{-m} in closed form.
    const double m = 1000.0;
    for (double t : {0.01, 0.5, 2.0, 8.0}) {
        const double want = -std::expm1(-m * std::log1p(t / (m - 1.0)));
        EXPECT_LT(rel_err(composite::f_cdf({m, 1.0, 1.0}, t), want), 1e-12) << "t=" << t;
    }
}

TEST(FDistribution, RejectsBadParameters) {
    EXPECT_THROW(composite::f_pdf({1.0, 1.0, 1.0}, 1.0), DomainError);
    EXPECT_THROW(composite::f_pdf({2.0, 0.0, 1.0}, 1.0), DomainError);
    EXPECT_THROW(composite::f_cdf({2.0, 1.0, 1.0}, 0.0), DomainError);
}

TEST(CompositeModel, ConstructionRules) {
    EXPECT_THROW(CompositeModel(1.0, 1.0, Rayleigh{1.0}), DomainError);
    EXPECT_THROW(CompositeModel(0.5, 1.0, Rayleigh{1.0}), DomainError);
    EXPECT_THROW(CompositeModel(2.0, 0.0, Rayleigh{1.0}), DomainError);
    EXPECT_TRUE(CompositeModel(3.0 + 1e-12, 1.0, Rayleigh{1.0}).integer_m());
    EXPECT_EQ(CompositeModel(3.0 + 1e-12, 1.0, Rayleigh{1.0}).m(), 3.0);
    EXPECT_FALSE(CompositeModel(3.01, 1.0, Rayleigh{1.0}).integer_m());
    // The baseline is renormalized; its own power is absorbed.
    const CompositeModel a(2.5, 1.7, Rician{3.0, 5.0});
    const CompositeModel b(2.5, 1.7, Rician{3.0, 1.0});
    EXPECT_NEAR(fading::mean_power(a.baseline()), 1.0, 1e-15);
    EXPECT_NEAR(composite::pdf(a, 0.9), composite::pdf(b, 0.9), 1e-15);
}

TEST(CompositeRayleigh, ClosedForms) {
    // IG(2)/Rayleigh: F_W(u) = u(u+2)/(u+1)^2, f_W(u) = 2/(u+1)^3.
    const CompositeModel model(2.0, 1.0, Rayleigh{1.0});
    for (Strategy s : kExplicit) {
        EXPECT_NEAR(composite::pdf(model, 1.0, s), 0.25, 1e-12) << strategy_name(s);
        EXPECT_NEAR(composite::cdf(model, 1.0, s), 0.75, 1e-9) << strategy_name(s);
        for (double u : {0.05, 0.4, 3.0, 15.0}) {
            EXPECT_NEAR(composite::pdf(model, u, s), 2.0 / std::pow(u + 1.0, 3), 1e-10) << strategy_name(s);
            EXPECT_NEAR(composite::cdf(model, u, s), u * (u + 2.0) / ((u + 1.0) * (u + 1.0)), 1e-9)
                << strategy_name(s);
        }
    }
    EXPECT_NEAR(composite::amplitude_pdf(model, 1.0), 0.5, 1e-12);
    EXPECT_NEAR(composite::outage(model, 3.0, 3.0), 0.75, 1e-12);
}

TEST(CompositeStrategies, AgreeWithDirectAveraging) {
    struct Case {
        double m;
        double w_bar;
        FadingModel baseline;
        std::function<double(double)> density;
    };
    const std::vector<Case> cases = {
        {5.0, 1.0, TWDP{4.0, 0.9, 1.0}, [](double x) { return oracle::twdp_pdf(4.0, 0.9, 1.0, x); }},
        {2.5, 8.0, TWDP{4.0, 0.3, 1.0}, [](double x) { return oracle::twdp_pdf(4.0, 0.3, 1.0, x); }},
        {3.5, 1.0, Rician{3.0, 1.0}, [](double x) { return oracle::rician_pdf(3.0, 1.0, x); }},
        {3.2, 2.0, KappaMuShadowed{2.0, 1.5, 3.0, 1.0},
         [](double x) { return oracle::kappa_mu_shadowed_pdf(2.0, 1.5, 3.0, 1.0, x); }},
        {2.5, 1.0, Hoyt{0.5, 1.0}, [](double x) { return oracle::hoyt_pdf(0.5, 1.0, x); }},
        {4.0, 1.0, EtaMu{0.4, 1.2, 1.0}, [](double x) { return oracle::eta_mu_pdf(0.4, 1.2, 1.0, x); }},
    };
    for (const auto& c : cases) {
        const CompositeModel model(c.m, c.w_bar, c.baseline);
        const DirectAverage oracle_w(c.m, c.w_bar, c.density);
        for (double u : {0.1 * c.w_bar, 0.8 * c.w_bar, 3.0 * c.w_bar}) {
            const double pdf_want = oracle_w.pdf(u);
            const double cdf_want = oracle_w.cdf(u);
            for (Strategy s : kExplicit) {
                if (!composite::is_available(model, s)) continue;
                EXPECT_NEAR(composite::pdf(model, u, s), pdf_want, 1e-7 * std::max(1.0, pdf_want))
                    << fading::name(c.baseline) << " m=" << c.m << " u=" << u << " " << strategy_name(s);
                EXPECT_NEAR(composite::cdf(model, u, s), cdf_want, 1e-7)
                    << fading::name(c.baseline) << " m=" << c.m << " u=" << u << " " << strategy_name(s);
            }
        }
    }
}

TEST(CompositeStrategies, ThreeWayAgreementTwdp) {
    const CompositeModel model(5.0, 1.0, TWDP{4.0, 0.9, 1.0});
    const double p_gen = composite::pdf(model, 0.8, Strategy::GmgfGeneral);
    const double c_gen = composite::cdf(model, 0.8, Strategy::GmgfGeneral);
    for (Strategy s : {Strategy::GmgfInteger, Strategy::Mixture}) {
        EXPECT_NEAR(composite::pdf(model, 0.8, s), p_gen, 1e-7);
        EXPECT_NEAR(composite::cdf(model, 0.8, s), c_gen, 1e-7);
    }
}

TEST(CompositeStrategies, NakagamiReducesToF) {
    const CompositeModel model(3.0, 1.0, NakagamiM{2.0, 1.0});
    const FDistParams f{3.0, 2.0, 1.0};
    const double want = composite::f_cdf(f, 1.3);
    EXPECT_NEAR(composite::cdf(model, 1.3, Strategy::GmgfInteger), want, 1e-8);
    EXPECT_NEAR(composite::cdf(model, 1.3, Strategy::GmgfGeneral), want, 1e-8);
    EXPECT_NEAR(composite::cdf(model, 1.3, Strategy::Mixture), want, 1e-8);
    const FMixture mix = composite::mixture_of_f(CompositeModel(3.4, 2.0, NakagamiM{1.7, 9.0}));
    ASSERT_EQ(mix.terms.size(), 1u);
    EXPECT_EQ(mix.terms[0].params.m, 3.4);
    EXPECT_EQ(mix.terms[0].params.k, 1.7);
    EXPECT_DOUBLE_EQ(mix.terms[0].params.omega, 2.0);
}

TEST(CompositeStrategies, SweepAgreement) {
    const std::vector<std::pair<double, FadingModel>> cases = {
        {2.0, TWDP{4.0, 0.3, 1.0}}, {3.0, TWDP{2.0, 0.9, 1.0}}, {2.7, KappaMu{2.0, 1.5, 1.0}},
        {4.0, NakagamiM{2.5, 1.0}}, {3.0, KappaMuShadowed{2.0, 1.5, 3.0, 1.0}}};
    for (const auto& [m, baseline] : cases) {
        const CompositeModel model(m, 1.0, baseline);
        for (double u = 0.05; u <= 20.0; u *= 1.6) {
            const double p_ref = composite::pdf(model, u, Strategy::Mixture);
            const double c_ref = composite::cdf(model, u, Strategy::Mixture);
            for (Strategy s : {Strategy::GmgfGeneral, Strategy::GmgfInteger}) {
                if (!composite::is_available(model, s)) continue;
                EXPECT_NEAR(composite::pdf(model, u, s), p_ref, 1e-6) << fading::name(baseline) << " u=" << u;
                EXPECT_NEAR(composite::cdf(model, u, s), c_ref, 1e-6) << fading::name(baseline) << " u=" << u;
            }
        }
    }
}

TEST(CompositeStrategies, AvailabilityAndAuto) {
    const CompositeModel real_m(2.5, 1.0, Hoyt{0.5, 1.0});
    EXPECT_THROW(composite::pdf(real_m, 1.0, Strategy::GmgfInteger), UnsupportedError);
    EXPECT_THROW(composite::pdf(real_m, 1.0, Strategy::Mixture), UnsupportedError);
    EXPECT_THROW(composite::mixture_of_f(real_m), UnsupportedError);
    EXPECT_EQ(composite::resolve(real_m, Strategy::Auto), Strategy::GmgfGeneral);
    EXPECT_EQ(composite::resolve(CompositeModel(3.0, 1.0, Hoyt{0.5, 1.0}), Strategy::Auto), Strategy::GmgfInteger);
    EXPECT_EQ(composite::resolve(CompositeModel(3.0, 1.0, TWDP{1.0, 0.5, 1.0}), Strategy::Auto), Strategy::Mixture);
}

TEST(CompositeCdf, ConvergenceFailureCarriesEstimate) {
    const CompositeModel model(2.5, 1.0, Rician{3.0, 1.0});
    Tolerance tol;
    tol.max_terms = 5;
    try {
        composite::cdf(model, 0.5, Strategy::GmgfGeneral, tol);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GE(e.best_estimate(), 0.0);
        EXPECT_LE(e.best_estimate(), 1.0);
    }
    const Evaluation ok = composite::evaluate_cdf(model, 0.5, Strategy::GmgfGeneral);
    EXPECT_GT(ok.terms, 5u);
    EXPECT_LT(ok.error_bound, 1e-8);
}

TEST(CompositePdf, NormalizedTwdp) {
    const CompositeModel model(3.7, 1.0, TWDP{4.0, 0.9, 1.0});
    const double total =
        oracle::integrate_log([&](double u) { return composite::pdf(model, u); }, -25.0, 18.0, 6000);
    EXPECT_NEAR(total, 1.0, 1e-6);
    const double amp_total =
        oracle::integrate_log([&](double r) { return composite::amplitude_pdf(model, r); }, -12.0, 9.0, 6000);
    EXPECT_NEAR(amp_total, 1.0, 1e-6);
}

TEST(CompositeCdf, LimitsMonotoneAndDerivative) {
    const CompositeModel model(2.6, 1.5, KappaMuShadowed{2.0, 1.5, 3.0, 1.0});
    double prev = 0.0;
    for (double u = 1e-6; u < 1e6; u *= 2.0) {
        const double f = composite::cdf(model, u);
        EXPECT_GE(f, prev - 1e-15);
        prev = f;
    }
    EXPECT_LT(composite::cdf(model, 1e-8), 1e-10);
    EXPECT_GT(composite::cdf(model, 1e8), 1.0 - 1e-10);
    for (double u : {0.2, 1.0, 4.0}) {
        const double h = 1e-4 * u;
        const double numeric = (composite::cdf(model, u + h) - composite::cdf(model, u - h)) / (2.0 * h);
        EXPECT_NEAR(numeric, composite::pdf(model, u), 1e-5);
        EXPECT_EQ(composite::amplitude_cdf(model, std::sqrt(u)), composite::cdf(model, std::sqrt(u) * std::sqrt(u)));
    }
}

TEST(CompositePdf, LargeShapeApproachesBaseline) {
    const TWDP baseline{7.0, 0.7, 1.0};
    const CompositeModel model(1000.0, 1.0, baseline);
    double worst = 0.0;
    for (double u = 0.01; u <= 6.0; u += 0.01) {
        worst = std::max(worst, std::abs(composite::pdf(model, u) - fading::pdf(baseline, u)));
    }
    EXPECT_LT(worst, 1e-2);
}

TEST(CompositePdf, UnderflowIsZeroNotNaN) {
    const CompositeModel model(4.0, 1.0, NakagamiM{3.0, 1.0});
    const double v = composite::pdf(model, 1e-300, Strategy::GmgfGeneral);
    EXPECT_EQ(v, 0.0);
}

TEST(Outage, ExamplesAndMonotonicity) {
    const CompositeModel model(3.0, 1.0, TWDP{2.0, 0.3, 1.0});
    EXPECT_EQ(composite::outage(model, 2.0, 2.0), composite::cdf(model, 1.0));
    double prev = 0.0;
    for (double th = 0.01; th < 100.0; th *= 1.5) {
        const double p = composite::outage(model, th, 10.0);
        EXPECT_GT(p, prev);
        prev = p;
    }
    const CompositeModel k0(2.0, 1.0, TWDP{0.0, 0.5, 1.0});
    EXPECT_NEAR(composite::outage_asymptotic(k0, 1e-3, 1.0), 2e-3, 1e-15);
    EXPECT_NEAR(composite::outage_asymptotic(k0, 2e-3, 1.0), 4e-3, 1e-15);
}

TEST(Outage, DiversityOrder) {
    auto slope = [](const CompositeModel& model) {
        // Least squares of log P_out against log(gamma_th / gamma_bar) on [1e-5, 1e-4].
        std::vector<double> xs, ys;
        for (int i = 0; i <= 10; ++i) {
            const double r = 1e-5 * std::pow(10.0, i / 10.0);
            xs.push_back(std::log(r));
            ys.push_back(std::log(composite::outage(model, r, 1.0)));
        }
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= xs.size();
        my /= ys.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
        return sxy / sxx;
    };
    for (double m : {2.0, 6.0}) {
        EXPECT_NEAR(slope(CompositeModel(m, 1.0, Rayleigh{1.0})), 1.0, 0.01);
        EXPECT_NEAR(slope(CompositeModel(m, 1.0, TWDP{4.0, 0.3, 1.0})), 1.0, 0.01);
        EXPECT_NEAR(slope(CompositeModel(m, 1.0, NakagamiM{2.0, 1.0})), 2.0, 0.02);
    }
    const double s2 = slope(CompositeModel(2.0, 1.0, TWDP{6.0, 0.3, 1.0}));
    const double s6 = slope(CompositeModel(6.0, 1.0, TWDP{6.0, 0.3, 1.0}));
    EXPECT_LT(std::abs(s2 - s6) / s6, 0.005);
    EXPECT_NEAR(slope(CompositeModel(3.5, 1.0, NakagamiM{2.0, 1.0})), 2.0, 0.02);
}

TEST(Outage, AsymptoteRatio) {
    for (const FadingModel& baseline :
         {FadingModel{Rayleigh{1.0}}, FadingModel{TWDP{2.0, 0.3, 1.0}}, FadingModel{TWDP{6.0, 0.3, 1.0}},
          FadingModel{Rician{3.0, 1.0}}}) {
        for (double m : {2.0, 6.0}) {
            const CompositeModel model(m, 1.0, baseline);
            const double ratio = composite::outage(model, 1e-4, 1.0) / composite::outage_asymptotic(model, 1e-4, 1.0);
            EXPECT_NEAR(ratio, 1.0, 0.02) << fading::name(baseline) << " m=" << m;
        }
    }
}

TEST(MixtureOfF, TwdpPoissonAndReconstruction) {
    const FMixture poisson = composite::mixture_of_f(CompositeModel(2.5, 3.0, TWDP{2.0, 0.0, 1.0}));
    EXPECT_NEAR(poisson.prefactor, std::exp(-2.0), 1e-15);
    EXPECT_NEAR(poisson.terms[3].weight, 8.0 / 6.0, 1e-12);
    EXPECT_EQ(poisson.terms[3].params.k, 4.0);

    const CompositeModel model(3.2, 1.0, KappaMuShadowed{2.0, 1.5, 3.0, 1.0});
    const FMixture mix = composite::mixture_of_f(model);
    for (double u : {0.05, 0.5, 1.0, 2.0, 8.0}) {
        oracle::CompensatedSum s;
        for (const auto& t : mix.terms) s.add(t.weight * composite::f_pdf(t.params, u));
        EXPECT_NEAR(static_cast<double>(s.value()) * mix.prefactor, composite::pdf(model, u, Strategy::GmgfGeneral),
                    1e-6);
    }
}
