#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "igfade/fading.hpp"
#include "igfade/numerics.hpp"

namespace igfade {

/// W = w_bar * xi * X with xi inverse gamma (shape m, mean 1) and X the
/// baseline renormalized to unit mean power. Immutable once built; copies
/// share a cache of the baseline's gamma mixture.
class CompositeModel {
public:
    /// Throws DomainError unless m > 1 and w_bar > 0. An m within 1e-9 of an
    /// integer is snapped to that integer.
    CompositeModel(double m, double w_bar, const FadingModel& baseline);

    double m() const noexcept { return m_; }
    bool integer_m() const noexcept { return integer_m_; }
    double w_bar() const noexcept { return w_bar_; }
    /// The normalized baseline (mean power 1).
    const FadingModel& baseline() const noexcept { return baseline_; }

    /// Gamma mixture of the normalized baseline, built once per rel_tol.
    const GammaMixture& baseline_mixture(const Tolerance& tol) const;

private:
    struct MixtureCache;

    double m_;
    double w_bar_;
    bool integer_m_;
    FadingModel baseline_;
    std::shared_ptr<MixtureCache> cache_;
};

/// Fisher-Snedecor F parameters: shadowing shape m, fading shape k, mean omega.
struct FDistParams {
    double m = 2.0;
    double k = 1.0;
    double omega = 1.0;
};

struct FComponent {
    double weight = 0.0;
    FDistParams params;
};

struct FMixture {
    std::vector<FComponent> terms;
    double prefactor = 1.0;
    double truncation_error_bound = 0.0;
};

enum class Strategy {
    Auto,           ///< Mixture, else GmgfInteger for integer m, else GmgfGeneral
    GmgfGeneral,    ///< pdf through the GMGF of order m; cdf through the infinite GMGF series
    GmgfInteger,    ///< integer m: cdf as a finite sum of m GMGF terms
    Mixture,        ///< mixture of F distributions
    NumericOracle,  ///< direct averaging over the gamma-distributed 1/xi by quadrature
};

const char* strategy_name(Strategy s);

/// A probability or density with what is known about its accuracy.
struct Evaluation {
    double value = 0.0;
    double error_bound = 0.0;  ///< truncation/quadrature estimate, absolute
    std::size_t terms = 0;     ///< series or mixture terms used (0 for closed forms)
    Strategy strategy = Strategy::Auto;
};

namespace composite {

double f_pdf(const FDistParams& params, double t);
double f_cdf(const FDistParams& params, double t);

bool is_available(const CompositeModel& model, Strategy strategy);
/// The concrete strategy Auto resolves to; other values are checked and returned.
/// Throws UnsupportedError when the strategy cannot serve the model.
Strategy resolve(const CompositeModel& model, Strategy strategy);

Evaluation evaluate_pdf(const CompositeModel& model, double u, Strategy strategy = Strategy::Auto,
                        const Tolerance& tol = {});
Evaluation evaluate_cdf(const CompositeModel& model, double u, Strategy strategy = Strategy::Auto,
                        const Tolerance& tol = {});

double pdf(const CompositeModel& model, double u, Strategy strategy = Strategy::Auto,
           const Tolerance& tol = {});
double cdf(const CompositeModel& model, double u, Strategy strategy = Strategy::Auto,
           const Tolerance& tol = {});

/// Envelope R = sqrt(W): 2 r f_W(r^2) and F_W(r^2).
double amplitude_pdf(const CompositeModel& model, double r, Strategy strategy = Strategy::Auto,
                     const Tolerance& tol = {});
double amplitude_cdf(const CompositeModel& model, double r, Strategy strategy = Strategy::Auto,
                     const Tolerance& tol = {});

/// P(gamma < gamma_th) = F_W(w_bar * gamma_th / gamma_bar).
double outage(const CompositeModel& model, double gamma_th, double gamma_bar,
              Strategy strategy = Strategy::Auto, const Tolerance& tol = {});
/// High-SNR power law of the outage probability from the baseline tail parameters.
double outage_asymptotic(const CompositeModel& model, double gamma_th, double gamma_bar);

FMixture mixture_of_f(const CompositeModel& model, const Tolerance& tol = {});

}  // namespace composite
}  // namespace igfade
