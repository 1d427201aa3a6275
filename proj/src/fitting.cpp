#include "igfade/fitting.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <numbers>

#include "detail/common.hpp"
#include "igfade/kernels.hpp"
#include "igfade/numerics.hpp"

namespace igfade::fitting {

namespace {

using detail::require;

// Panels per unit of data range for the step integrals.
constexpr double kPanelsPerRange = 2000.0;
constexpr double kPenalty = 1e30;
constexpr std::size_t kStallIterations = 200;

double pad_integral(const std::function<double(double)>& integrand, double a, double b) {
    if (!(b > a)) return 0.0;
    try {
        return numerics::integrate_finite(integrand, a, b).value;
    } catch (const ConvergenceError& e) {
        return e.best_estimate();
    }
}

}  // namespace

double cvm_statistic(const EmpiricalCdf& ecdf, const std::function<double(double)>& theory, double support_pad) {
    require(ecdf.size() > 0, "cvm_statistic: empty eCDF");
    require(support_pad >= 0.0 && std::isfinite(support_pad), "cvm_statistic: pad must be nonnegative");
    const auto& t = ecdf.abscissa;
    const auto& level = ecdf.value;
    const std::size_t n = t.size();
    const double range = t.back() - t.front();
    const double h_max = range > 0.0 ? range / kPanelsPerRange : 1.0;

    // Simpson nodes for every step interval, flattened so the squared-difference
    // sum runs as one kernel call.
    std::vector<double> nodes, weights, levels;
    nodes.reserve(2 * n + 1);
    weights.reserve(2 * n + 1);
    levels.reserve(2 * n + 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double len = t[i + 1] - t[i];
        const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h_max)));
        const double h = len / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double a = t[i] + h * static_cast<double>(p);
            const double b = p + 1 == panels ? t[i + 1] : a + h;
            // The right end is sampled just inside the step so a discontinuous theory
            // is integrated with its left limit there.
            nodes.insert(nodes.end(), {a, 0.5 * (a + b), std::nextafter(b, a)});
            weights.insert(weights.end(), {(b - a) / 6.0, 4.0 * (b - a) / 6.0, (b - a) / 6.0});
            levels.insert(levels.end(), 3, level[i]);
        }
    }
    std::vector<double> values(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) values[j] = theory(nodes[j]);
    double total = kernels::weighted_squared_diff(weights, levels, values);

    // Below the data F-hat is 0, above it F-hat is 1.
    total += pad_integral([&](double x) { const double f = theory(x); return f * f; }, t.front() - support_pad,
                          t.front());
    total += pad_integral([&](double x) { const double f = 1.0 - theory(x); return f * f; }, t.back(),
                          t.back() + support_pad);
    return total;
}

double db_to_natural_log(double t_db, DbDirection direction) {
    return direction == DbDirection::Paper ? 20.0 * t_db / std::numbers::ln10 : t_db * std::numbers::ln10 / 20.0;
}

namespace {

// A parameter confined to [lo, hi] through a logistic map of an unconstrained
// coordinate, on a log scale for positive quantities.
struct Bound {
    double lo;
    double hi;
    bool log_scale;
    double offset = 0.0;  // the bounded quantity is offset + value

    double to_value(double z) const {
        const double s = 1.0 / (1.0 + std::exp(-z));
        if (log_scale) return offset + std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo)));
        return lo + s * (hi - lo);
    }
    double to_z(double value) const {
        double s = log_scale ? (std::log(value - offset) - std::log(lo)) / (std::log(hi) - std::log(lo))
                             : (value - lo) / (hi - lo);
        s = std::clamp(s, 1e-9, 1.0 - 1e-9);
        return std::log(s / (1.0 - s));
    }
};

struct Family {
    std::array<Bound, 2> bounds;
    std::function<ShadowingModel(double, double)> make;
};

Family family_spec(ShadowingFamily family) {
    switch (family) {
        case ShadowingFamily::Lognormal:
            return {{Bound{std::log(1e-6), std::log(1e6), false}, Bound{1e-3, 5.0, true}},
                    [](double mu, double sigma) { return ShadowingModel{Lognormal{mu, sigma}}; }};
        case ShadowingFamily::Gamma:
            return {{Bound{0.05, 1e4, true}, Bound{1e-6, 1e6, true}},
                    [](double k, double omega) { return ShadowingModel{GammaSh{k, omega}}; }};
        case ShadowingFamily::InverseGaussian:
            return {{Bound{1e-6, 1e8, true}, Bound{1e-6, 1e6, true}},
                    [](double lambda, double mu) { return ShadowingModel{InverseGaussian{mu, lambda}}; }};
        case ShadowingFamily::InverseGamma:
            return {{Bound{1e-6, 1e4 - 1.0, true, 1.0}, Bound{1e-6, 1e6, true}},
                    [](double m, double omega) { return ShadowingModel{InverseGamma{m, omega}}; }};
    }
    throw UnsupportedError("fit: unknown family");
}

struct LogMoments {
    double mean;
    double sd;
};

LogMoments log_moments(const EmpiricalCdf& e) {
    double mean = 0.0, sq = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double w = e.value[i] - prev;
        prev = e.value[i];
        mean += w * e.abscissa[i];
        sq += w * e.abscissa[i] * e.abscissa[i];
    }
    return {mean, std::sqrt(std::max(sq - mean * mean, 1e-12))};
}

double digamma_approx(double x) { return std::log(x) - 0.5 / x - 1.0 / (12.0 * x * x); }

// (shape-like, scale-like) starting point from the log-data mean and spread.
std::array<double, 2> moment_start(ShadowingFamily family, const LogMoments& lm) {
    const double v = lm.sd * lm.sd;
    switch (family) {
        case ShadowingFamily::Lognormal: return {lm.mean, lm.sd};
        case ShadowingFamily::Gamma: {
            const double k = 1.0 / v + 0.5;
            return {k, k * std::exp(lm.mean - digamma_approx(k))};
        }
        case ShadowingFamily::InverseGaussian: {
            const double mu = std::exp(lm.mean + 0.5 * v);
            return {mu / v, mu};
        }
        case ShadowingFamily::InverseGamma: {
            const double m = std::max(1.5, 1.0 / v + 0.5);
            return {m, std::exp(lm.mean + digamma_approx(m)) / (m - 1.0)};
        }
    }
    return {1.0, 1.0};
}

// Nodes of the interpolation table: the data range split into kDataIntervals,
// each pad into kPadIntervals.
constexpr std::size_t kDataIntervals = 2000;
constexpr std::size_t kPadIntervals = 250;

// Integrals over [0, s] of the cubic Hermite basis functions.
std::array<double, 4> hermite_partial(double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    return {s - s3 + 0.5 * s4, 0.5 * s2 - 2.0 * s3 / 3.0 + 0.25 * s4, s3 - 0.5 * s4, 0.25 * s4 - s3 / 3.0};
}

// The CvM objective with F(e^t) replaced by its cubic Hermite interpolant (values
// plus log-domain density) on a fixed table. Expanding the square,
//   int (Fhat - F)^2 = int Fhat^2 - 2 int Fhat F + int F^2,
// the cross term is linear in the table entries, so the data collapse onto the
// nodes once and each evaluation costs a few thousand CDF calls whatever the
// sample size.
class TableObjective {
public:
    TableObjective(const EmpiricalCdf& e, double pad) {
        const double lo = e.abscissa.front(), hi = e.abscissa.back();
        const std::size_t np = pad > 0.0 ? kPadIntervals : 0;
        for (std::size_t i = 0; i < np; ++i) x_.push_back(lo - pad + pad * static_cast<double>(i) / static_cast<double>(np));
        const double h = (hi - lo) / static_cast<double>(kDataIntervals);
        for (std::size_t i = 0; i < kDataIntervals; ++i) x_.push_back(lo + h * static_cast<double>(i));
        for (std::size_t i = 0; i <= np; ++i) x_.push_back(hi + pad * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(np, 1)));
        const std::size_t intervals = x_.size() - 1;
        mass_.assign(intervals, 0.0);
        for (auto& a : basis_) a.assign(intervals, 0.0);

        double prev = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const double w = e.value[i] - prev;
            prev = e.value[i];
            const double t = e.abscissa[i];
            std::size_t j = np + std::min(kDataIntervals - 1, static_cast<std::size_t>(std::max(0.0, (t - lo) / h)));
            if (t >= hi) j = np + kDataIntervals - 1;
            const double hj = x_[j + 1] - x_[j];
            const double s = std::clamp((t - x_[j]) / hj, 0.0, 1.0);
            const auto ip = hermite_partial(s);
            mass_[j] += w;
            for (int k = 0; k < 4; ++k) basis_[k][j] += w * hj * ip[k];
        }
        // int Fhat^2 over the padded support.
        for (std::size_t i = 0; i + 1 < e.size(); ++i) {
            fhat_sq_ += e.value[i] * e.value[i] * (e.abscissa[i + 1] - e.abscissa[i]);
        }
        fhat_sq_ += x_.back() - hi;
    }

    double operator()(const ShadowingModel& model) const {
        const std::size_t n = x_.size();
        std::vector<double> f(n), d(n);
        for (std::size_t j = 0; j < n; ++j) {
            f[j] = shadowing::log_domain_cdf(model, x_[j]);
            const double y = std::exp(x_[j]);
            d[j] = y > 0.0 && std::isfinite(y) ? shadowing::pdf(model, y) * y : 0.0;
        }
        // 4-point Gauss-Legendre on [0, 1] integrates the squared cubic exactly.
        static constexpr std::array<double, 4> gx{0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
                                                  0.9305681557970262};
        static constexpr std::array<double, 4> gw{0.17392742256872692, 0.32607257743127307, 0.32607257743127307,
                                                  0.17392742256872692};
        double cumulative = 0.0, cross = 0.0, f_sq = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double h = x_[j + 1] - x_[j];
            cross += mass_[j] * cumulative + basis_[0][j] * f[j] + basis_[1][j] * h * d[j] +
                     basis_[2][j] * f[j + 1] + basis_[3][j] * h * d[j + 1];
            double sq = 0.0;
            for (int q = 0; q < 4; ++q) {
                const double s = gx[q], s2 = s * s, s3 = s2 * s;
                const double p = (2 * s3 - 3 * s2 + 1) * f[j] + (s3 - 2 * s2 + s) * h * d[j] +
                                 (-2 * s3 + 3 * s2) * f[j + 1] + (s3 - s2) * h * d[j + 1];
                sq += gw[q] * p * p;
            }
            f_sq += h * sq;
            cumulative += h * (0.5 * (f[j] + f[j + 1]) + h * (d[j] - d[j + 1]) / 12.0);
        }
        // int Fhat F = G(b) - sum_i w_i G(t_i) with G the running integral of F.
        const double fhat_f = cumulative - cross;
        return std::max(0.0, fhat_sq_ - 2.0 * fhat_f + f_sq);
    }

private:
    std::vector<double> x_;
    std::vector<double> mass_;
    std::array<std::vector<double>, 4> basis_;
    double fhat_sq_ = 0.0;
};

struct Objective {
    const TableObjective* table;
    const Family* family;
    // Coordinates fixed at a value instead of optimized (integer m).
    int fixed_index = -1;
    double fixed_value = 0.0;

    std::array<double, 2> values(const gsl_vector* z) const {
        std::array<double, 2> v{};
        std::size_t k = 0;
        for (int i = 0; i < 2; ++i) {
            v[i] = i == fixed_index ? fixed_value : family->bounds[i].to_value(gsl_vector_get(z, k++));
        }
        return v;
    }

    double operator()(const std::array<double, 2>& v) const {
        try {
            const ShadowingModel model = family->make(v[0], v[1]);
            shadowing::validate(model);
            const double value = (*table)(model);
            return std::isfinite(value) ? value : kPenalty;
        } catch (const std::exception&) {
            return kPenalty;
        }
    }
};

// The reported statistic: exact theory, step-wise quadrature.
double exact_cvm(const EmpiricalCdf& e, const ShadowingModel& model, double pad) {
    try {
        const double v = cvm_statistic(e, [&](double t) { return shadowing::log_domain_cdf(model, t); }, pad);
        return std::isfinite(v) ? v : kPenalty;
    } catch (const std::exception&) {
        return kPenalty;
    }
}

double gsl_objective(const gsl_vector* z, void* params) {
    const auto* obj = static_cast<const Objective*>(params);
    return (*obj)(obj->values(z));
}

struct SimplexRun {
    std::array<double, 2> values{};
    double cvm = kPenalty;
    std::size_t iterations = 0;
    bool converged = false;
};

SimplexRun run_simplex(const Objective& obj, const std::array<double, 2>& start, std::size_t max_iterations) {
    const std::size_t dim = obj.fixed_index >= 0 ? 1 : 2;
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(dim), gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(dim), gsl_vector_free);
    std::size_t k = 0;
    for (int i = 0; i < 2; ++i) {
        if (i == obj.fixed_index) continue;
        gsl_vector_set(x.get(), k, obj.family->bounds[i].to_z(start[i]));
        gsl_vector_set(step.get(), k, 0.3);
        ++k;
    }
    gsl_multimin_function fn{&gsl_objective, dim, const_cast<Objective*>(&obj)};
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), gsl_multimin_fminimizer_free);
    SimplexRun run;
    // A fresh simplex around the previous best catches premature collapse.
    for (int restart = 0; restart < 2; ++restart) {
        gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get());
        int status = GSL_CONTINUE;
        std::size_t iter = 0;
        // A simplex drifting across a flat region (a box edge, the penalty plateau)
        // shrinks slowly; stop once the best value has stalled.
        double best = gsl_multimin_fminimizer_minimum(solver.get());
        std::size_t since_improvement = 0;
        while (status == GSL_CONTINUE && iter < max_iterations) {
            ++iter;
            if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
            status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), 1e-6);
            const double now = gsl_multimin_fminimizer_minimum(solver.get());
            if (now < best - 1e-10 * std::abs(best)) {
                best = now;
                since_improvement = 0;
            } else if (++since_improvement >= kStallIterations) {
                status = GSL_SUCCESS;
            }
        }
        run.iterations += iter;
        run.converged = status == GSL_SUCCESS;
        gsl_vector_memcpy(x.get(), gsl_multimin_fminimizer_x(solver.get()));
        for (std::size_t j = 0; j < dim; ++j) gsl_vector_set(step.get(), j, 0.05);
    }
    run.values = obj.values(x.get());
    run.cvm = gsl_multimin_fminimizer_minimum(solver.get());
    return run;
}

constexpr std::array<std::array<double, 2>, 8> kLattice{{
    {1.0, 1.0}, {0.5, 1.0}, {2.0, 1.0}, {1.0, 0.7}, {1.0, 1.4}, {0.25, 1.0}, {4.0, 1.0}, {0.5, 1.4}}};

std::array<double, 2> lattice_start(ShadowingFamily family, const std::array<double, 2>& base, std::size_t i) {
    const auto& f = kLattice[i % kLattice.size()];
    const double spread = 1.0 + static_cast<double>(i / kLattice.size());  // wider rings past 8 starts
    const double a = std::pow(f[0], spread);
    const double b = std::pow(f[1], spread);
    if (family == ShadowingFamily::Lognormal) return {base[0] + std::log(b), base[1] * a};
    if (family == ShadowingFamily::InverseGamma) return {1.0 + (base[0] - 1.0) * a, base[1] * b};
    return {base[0] * a, base[1] * b};
}

std::array<double, 2> clamp_into(const Family& fam, std::array<double, 2> v) {
    for (int i = 0; i < 2; ++i) {
        const Bound& b = fam.bounds[i];
        const double lo = b.log_scale ? b.offset + b.lo : b.lo;
        const double hi = b.log_scale ? b.offset + b.hi : b.hi;
        v[i] = std::clamp(v[i], lo * (1.0 + 1e-9) + (lo == 0.0 ? 1e-12 : 0.0), hi * (1.0 - 1e-9));
        if (!b.log_scale) v[i] = std::clamp(v[i], lo + 1e-9 * (hi - lo), hi - 1e-9 * (hi - lo));
    }
    return v;
}

void check_data(const EmpiricalCdf& e) {
    require(e.size() > 0, "fit: empty eCDF");
    require(e.size() > 1, "fit: data has a single distinct value");
    for (double t : e.abscissa) require(std::isfinite(t), "fit: non-finite data");
}

FitResult fit_integer_m(const EmpiricalCdf& e, const TableObjective& table, const FitResult& real_fit,
                        const FitOptions& options) {
    const Family fam = family_spec(ShadowingFamily::InverseGamma);
    const auto& ig = std::get<InverseGamma>(real_fit.params);
    FitResult best;
    best.family = ShadowingFamily::InverseGamma;
    best.integer_m = true;
    best.cvm = std::numeric_limits<double>::infinity();
    const double lo = std::max(2.0, std::floor(ig.m) - 1.0);
    const double hi = std::max(lo, std::ceil(ig.m) + 1.0);
    for (double m = lo; m <= hi; m += 1.0) {
        const Objective obj{&table, &fam, 0, m};
        for (double scale : {1.0, 0.7, 1.4}) {
            const SimplexRun run = run_simplex(obj, {m, ig.omega_i * scale}, options.max_iterations);
            const InverseGamma candidate{m, run.values[1]};
            const double cvm = exact_cvm(e, candidate, options.support_pad);
            if (cvm < best.cvm) {
                best.cvm = cvm;
                best.params = candidate;
                best.converged = run.converged;
            }
            best.iterations += run.iterations;
        }
    }
    return best;
}

}  // namespace

FitResult fit(ShadowingFamily family, const EmpiricalCdf& log_ecdf, const FitOptions& options) {
    check_data(log_ecdf);
    require(options.multistart >= 1, "fit: multistart must be at least 1");
    const Family fam = family_spec(family);
    const auto base = moment_start(family, log_moments(log_ecdf));
    const TableObjective table(log_ecdf, options.support_pad);
    const Objective obj{&table, &fam};
    FitResult result;
    result.family = family;
    result.cvm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < options.multistart; ++i) {
        const SimplexRun run = run_simplex(obj, clamp_into(fam, lattice_start(family, base, i)), options.max_iterations);
        result.iterations += run.iterations;
        // Starts are ranked on the exact statistic so more starts never do worse.
        const ShadowingModel candidate = fam.make(run.values[0], run.values[1]);
        const double cvm = run.cvm < kPenalty ? exact_cvm(log_ecdf, candidate, options.support_pad) : kPenalty;
        if (cvm < result.cvm) {
            result.cvm = cvm;
            result.params = candidate;
            result.converged = run.converged;
        }
    }
    if (!(result.cvm < kPenalty)) {
        result.converged = false;
        result.error = "no parameter in the box gave a finite statistic";
    }
    if (options.integer_m && family == ShadowingFamily::InverseGamma && result.error.empty()) {
        return fit_integer_m(log_ecdf, table, result, options);
    }
    return result;
}

std::vector<FitResult> compare_families(const EmpiricalCdf& log_ecdf, std::span<const ShadowingFamily> families,
                                        const FitOptions& options) {
    require(!families.empty(), "compare_families: no families requested");
    check_data(log_ecdf);
    struct Job {
        ShadowingFamily family;
        bool integer_m;
    };
    std::vector<Job> jobs;
    for (ShadowingFamily f : families) {
        jobs.push_back({f, false});
        if (options.integer_m && f == ShadowingFamily::InverseGamma) jobs.push_back({f, true});
    }
    std::vector<std::future<FitResult>> pending;
    for (const Job& job : jobs) {
        pending.push_back(std::async(std::launch::async, [&log_ecdf, options, job] {
            FitOptions o = options;
            o.integer_m = job.integer_m;
            try {
                return fit(job.family, log_ecdf, o);
            } catch (const std::exception& e) {
                FitResult failed;
                failed.family = job.family;
                failed.integer_m = job.integer_m;
                failed.cvm = std::numeric_limits<double>::infinity();
                failed.error = e.what();
                return failed;
            }
        }));
    }
    std::vector<FitResult> out;
    for (auto& p : pending) out.push_back(p.get());
    std::stable_sort(out.begin(), out.end(), [](const FitResult& a, const FitResult& b) {
        if (a.error.empty() != b.error.empty()) return a.error.empty();
        return a.cvm < b.cvm;
    });
    return out;
}

std::string label(const FitResult& result) {
    std::string name = family_name(result.family);
    if (result.integer_m) name += " (integer m)";
    return name;
}

}  // namespace igfade::fitting
