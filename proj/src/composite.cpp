#include "igfade/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "detail/common.hpp"

namespace igfade {

namespace {

using detail::positive;
using detail::require;
namespace nm = numerics;

// exp() of anything below this underflows to zero.
constexpr double kLogUnderflow = -745.0;

}  // namespace

struct CompositeModel::MixtureCache {
    std::mutex mutex;
    std::map<double, GammaMixture> by_rel_tol;
};

CompositeModel::CompositeModel(double m, double w_bar, const FadingModel& baseline)
    : m_(m), w_bar_(w_bar), integer_m_(false), baseline_(baseline),
      cache_(std::make_shared<MixtureCache>()) {
    require(m > 1.0 && std::isfinite(m), "composite: shadowing shape m must exceed 1");
    require(positive(w_bar), "composite: mean power must be positive");
    fading::validate(baseline);
    if (nm::is_near_integer(m_)) {
        m_ = std::round(m_);
        integer_m_ = true;
    }
    baseline_ = fading::with_mean_power(baseline, 1.0);
}

const GammaMixture& CompositeModel::baseline_mixture(const Tolerance& tol) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->by_rel_tol.find(tol.rel_tol);
    if (it == cache_->by_rel_tol.end()) {
        it = cache_->by_rel_tol.emplace(tol.rel_tol, fading::gamma_mixture(baseline_, tol)).first;
    }
    return it->second;
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Auto: return "auto";
        case Strategy::GmgfGeneral: return "gmgf-general";
        case Strategy::GmgfInteger: return "gmgf-integer";
        case Strategy::Mixture: return "mixture";
        case Strategy::NumericOracle: return "numeric";
    }
    return "unknown";
}

namespace composite {

namespace {

void check_f(const FDistParams& p, double t) {
    require(p.m > 1.0 && std::isfinite(p.m), "F distribution: m must exceed 1");
    require(positive(p.k), "F distribution: k must be positive");
    require(positive(p.omega), "F distribution: omega must be positive");
    require(t > 0.0 && !std::isnan(t), "F distribution: t must be positive");
}

double log_f_pdf(const FDistParams& p, double t) {
    const double scale = (p.m - 1.0) * p.omega;
    return p.m * std::log(p.m - 1.0) + p.k * std::log(p.k) - nm::ln_beta(p.m, p.k) +
           (p.k - 1.0) * std::log(t) + p.m * std::log(p.omega) - (p.m + p.k) * std::log(scale + p.k * t);
}

// Gamma density of G = 1/xi: shape m, mean m / (m - 1).
double inverse_shadowing_pdf(double m, double g) {
    return std::exp(detail::log_gamma_pdf(m, m / (m - 1.0), g));
}

// Integer-order GMGF through the closed form, moving to the log form once the
// closed form leaves the normal double range.
double log_gmgf_integer(const FadingModel& x, double n, double s, const Tolerance& tol) {
    const double g = fading::gmgf(x, n, s, tol);
    if (g > 1e-290 && g < 1e290) return std::log(g);
    return fading::log_gmgf(x, n, s, tol);
}

Evaluation pdf_gmgf(const CompositeModel& model, double u, Strategy strategy, const Tolerance& tol) {
    const double m = model.m();
    const double c = (m - 1.0) * model.w_bar() / u;
    const double lead = m * std::log((m - 1.0) * model.w_bar()) - (m + 1.0) * std::log(u) - std::lgamma(m);
    double log_value = 0.0;
    if (strategy == Strategy::GmgfInteger) {
        log_value = lead + log_gmgf_integer(model.baseline(), m, -c, tol);
    } else {
        log_value = lead + fading::log_gmgf(model.baseline(), m, -c, tol);
    }
    if (log_value < kLogUnderflow) return {0.0, 0.0, 0, strategy};
    return {std::exp(log_value), 0.0, 0, strategy};
}

// 1 - sum_n c^{m+n} / Gamma(m+n+1) phi^{(m+n)}(-c). Terms rise to a peak and then
// fall; the sum stops only past the peak, once three consecutive terms are
// negligible, and the geometric tail beyond the last term is reported as the bound.
// Below this the complement 1 - sum has lost too many digits to the series
// truncation and cancellation.
constexpr double kLowerTail = 0.1;

// F_W(u) as the integral of the GMGF pdf over (0, u], in y = ln(u / t). Every
// contribution is positive, so small probabilities keep full relative accuracy.
Evaluation lower_tail_cdf(const CompositeModel& model, double u, std::size_t terms, const Tolerance& tol) {
    const double decay = fading::tail_params(model.baseline()).beta + 1.0;
    const Estimate e = nm::integrate_semi_infinite(
        [&](double y) {
            // Beyond y = 500 the integrand is below t^(beta+1) ~ e^-500.
            if (y > 500.0) return 0.0;
            const double t = u * std::exp(-y);
            return pdf_gmgf(model, t, Strategy::GmgfGeneral, tol).value * t;
        },
        tol, 1.0 / decay);
    return {std::clamp(e.value, 0.0, 1.0), e.error, terms, Strategy::GmgfGeneral};
}

Evaluation cdf_gmgf_series(const CompositeModel& model, double u, const Tolerance& tol) {
    const double m = model.m();
    const double c = (m - 1.0) * model.w_bar() / u;
    const double log_c = std::log(c);
    double sum = 0.0;
    double comp = 0.0;
    double previous = 0.0;
    double peak = 0.0;
    std::size_t quiet = 0;
    for (std::size_t n = 0; n < tol.max_terms; ++n) {
        const double order = m + static_cast<double>(n);
        const double log_term =
            order * log_c - std::lgamma(order + 1.0) + fading::log_gmgf(model.baseline(), order, -c, tol);
        const double term = log_term < kLogUnderflow ? 0.0 : std::exp(log_term);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        peak = std::max(peak, term);
        const bool falling = n > 0 && term <= previous && term < peak;
        const double total = sum + comp;
        const double ratio = previous > 0.0 ? term / previous : 0.0;
        const double tail = ratio < 1.0 ? term * ratio / (1.0 - ratio) : INFINITY;
        const double target = tol.rel_tol * std::max(total, tol.abs_tol);
        if ((falling || peak == 0.0) && term <= target && tail <= target) {
            ++quiet;
        } else {
            quiet = 0;
        }
        if (quiet >= 3 || (n > 0 && term == 0.0 && previous == 0.0 && peak > 0.0)) {
            const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n + 1);
            const double bound = std::isfinite(tail) ? tail : 0.0;
            const double value = std::clamp(1.0 - total, 0.0, 1.0);
            if (value < kLowerTail) return lower_tail_cdf(model, u, n + 1, tol);
            return {value, bound + rounding, n + 1, Strategy::GmgfGeneral};
        }
        previous = term;
    }
    throw ConvergenceError("composite cdf: GMGF series hit max_terms", std::clamp(1.0 - (sum + comp), 0.0, 1.0),
                           previous);
}

// sum_{n<m} c^n / n! phi^{(n)}(-c) for integer m.
Evaluation cdf_gmgf_finite(const CompositeModel& model, double u, const Tolerance& tol) {
    const auto m = static_cast<int>(model.m());
    const double c = (model.m() - 1.0) * model.w_bar() / u;
    double sum = 0.0;
    for (int n = 0; n < m; ++n) {
        const double log_term = n * std::log(c) - std::lgamma(n + 1.0) + log_gmgf_integer(model.baseline(), n, -c, tol);
        if (log_term > kLogUnderflow) sum += std::exp(log_term);
    }
    return {std::clamp(sum, 0.0, 1.0), 0.0, static_cast<std::size_t>(m), Strategy::GmgfInteger};
}

Evaluation mixture_eval(const CompositeModel& model, double u, bool want_cdf, const Tolerance& tol) {
    const GammaMixture& mix = model.baseline_mixture(tol);
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& term : mix.terms) {
        if (term.weight == 0.0) continue;
        const FDistParams f{model.m(), term.shape, term.omega * model.w_bar()};
        const double v = term.weight * (want_cdf ? f_cdf(f, u) : f_pdf(f, u));
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value = mix.prefactor * (sum + comp);
    if (want_cdf) value = std::clamp(value, 0.0, 1.0);
    return {value, mix.truncation_error_bound, mix.terms.size(), Strategy::Mixture};
}

// Direct average over G = 1/xi: f_W(u) = E[G f_X(u G / w) / w], F_W(u) = E[F_X(u G / w)].
Evaluation numeric_eval(const CompositeModel& model, double u, bool want_cdf, const Tolerance& tol) {
    const double m = model.m();
    const double w = model.w_bar();
    const FadingModel& x = model.baseline();
    auto integrand = [&](double g) {
        const double density = inverse_shadowing_pdf(m, g);
        if (density == 0.0) return 0.0;
        const double arg = u * g / w;
        if (want_cdf) return density * fading::cdf(x, arg, tol);
        return density * g / w * fading::pdf(x, arg, tol);
    };
    // Split at the mode of G so the quadrature sees the peak.
    const double mode = (m - 1.0) / (m - 1.0);  // mode of Gamma(m, mean m/(m-1)) is 1
    const double sd = std::sqrt(m) / (m - 1.0);
    const double split = mode + 8.0 * sd;
    const Estimate head = nm::integrate_finite(integrand, 0.0, split, tol);
    const Estimate tail = nm::integrate_semi_infinite(
        [&](double t) { return integrand(split + t); }, tol, sd);
    double value = head.value + tail.value;
    if (want_cdf) value = std::clamp(value, 0.0, 1.0);
    return {value, head.error + tail.error, 0, Strategy::NumericOracle};
}

void check_u(double u) { require(u > 0.0 && !std::isnan(u), "composite: u must be positive"); }

}  // namespace

double f_pdf(const FDistParams& params, double t) {
    check_f(params, t);
    if (std::isinf(t)) return 0.0;
    const double lv = log_f_pdf(params, t);
    return lv < kLogUnderflow ? 0.0 : std::exp(lv);
}

double f_cdf(const FDistParams& params, double t) {
    check_f(params, t);
    if (std::isinf(t)) return 1.0;
    // The F CDF equals the regularized incomplete beta I_x(k, m) with x = y / (1 + y),
    // y = k t / ((m - 1) omega).
    const double y = params.k * t / ((params.m - 1.0) * params.omega);
    return nm::reg_incomplete_beta(params.k, params.m, y / (1.0 + y));
}

bool is_available(const CompositeModel& model, Strategy strategy) {
    switch (strategy) {
        case Strategy::Auto:
        case Strategy::GmgfGeneral:
        case Strategy::NumericOracle: return true;
        case Strategy::GmgfInteger: return model.integer_m();
        case Strategy::Mixture: return fading::has_gamma_mixture(model.baseline());
    }
    return false;
}

Strategy resolve(const CompositeModel& model, Strategy strategy) {
    if (strategy == Strategy::Auto) {
        if (fading::has_gamma_mixture(model.baseline())) return Strategy::Mixture;
        if (model.integer_m()) return Strategy::GmgfInteger;
        return Strategy::GmgfGeneral;
    }
    if (!is_available(model, strategy)) {
        throw UnsupportedError(std::string("strategy ") + strategy_name(strategy) + " is not available for " +
                               fading::name(model.baseline()) +
                               (strategy == Strategy::GmgfInteger ? " with non-integer m" : ""));
    }
    return strategy;
}

Evaluation evaluate_pdf(const CompositeModel& model, double u, Strategy strategy, const Tolerance& tol) {
    check_u(u);
    tol.validate();
    const Strategy s = resolve(model, strategy);
    if (std::isinf(u)) return {0.0, 0.0, 0, s};
    switch (s) {
        case Strategy::Mixture: return mixture_eval(model, u, false, tol);
        case Strategy::NumericOracle: return numeric_eval(model, u, false, tol);
        default: return pdf_gmgf(model, u, s, tol);
    }
}

Evaluation evaluate_cdf(const CompositeModel& model, double u, Strategy strategy, const Tolerance& tol) {
    check_u(u);
    tol.validate();
    const Strategy s = resolve(model, strategy);
    if (std::isinf(u)) return {1.0, 0.0, 0, s};
    switch (s) {
        case Strategy::Mixture: return mixture_eval(model, u, true, tol);
        case Strategy::NumericOracle: return numeric_eval(model, u, true, tol);
        case Strategy::GmgfInteger: return cdf_gmgf_finite(model, u, tol);
        default: return cdf_gmgf_series(model, u, tol);
    }
}

double pdf(const CompositeModel& model, double u, Strategy strategy, const Tolerance& tol) {
    return evaluate_pdf(model, u, strategy, tol).value;
}

double cdf(const CompositeModel& model, double u, Strategy strategy, const Tolerance& tol) {
    return evaluate_cdf(model, u, strategy, tol).value;
}

double amplitude_pdf(const CompositeModel& model, double r, Strategy strategy, const Tolerance& tol) {
    require(r > 0.0, "amplitude_pdf: r must be positive");
    return 2.0 * r * pdf(model, r * r, strategy, tol);
}

double amplitude_cdf(const CompositeModel& model, double r, Strategy strategy, const Tolerance& tol) {
    require(r > 0.0, "amplitude_cdf: r must be positive");
    return cdf(model, r * r, strategy, tol);
}

double outage(const CompositeModel& model, double gamma_th, double gamma_bar, Strategy strategy,
              const Tolerance& tol) {
    require(positive(gamma_th) && positive(gamma_bar), "outage: SNR values must be positive");
    return cdf(model, model.w_bar() * gamma_th / gamma_bar, strategy, tol);
}

double outage_asymptotic(const CompositeModel& model, double gamma_th, double gamma_bar) {
    require(positive(gamma_th) && positive(gamma_bar), "outage_asymptotic: SNR values must be positive");
    const TailParams tp = fading::tail_params(model.baseline());
    const double m = model.m();
    const double b1 = tp.beta + 1.0;
    const double log_value = std::lgamma(tp.beta + m + 1.0) - std::lgamma(m) - b1 * std::log(m - 1.0) +
                             std::log(tp.alpha / b1) + b1 * std::log(gamma_th / gamma_bar);
    return std::exp(log_value);
}

FMixture mixture_of_f(const CompositeModel& model, const Tolerance& tol) {
    if (!fading::has_gamma_mixture(model.baseline())) {
        throw UnsupportedError("mixture_of_f: no gamma mixture for " + fading::name(model.baseline()));
    }
    const GammaMixture& mix = model.baseline_mixture(tol);
    FMixture out;
    out.prefactor = mix.prefactor;
    out.truncation_error_bound = mix.truncation_error_bound;
    out.terms.reserve(mix.terms.size());
    for (const auto& t : mix.terms) {
        out.terms.push_back({t.weight, FDistParams{model.m(), t.shape, t.omega * model.w_bar()}});
    }
    return out;
}

}  // namespace composite
}  // namespace igfade
