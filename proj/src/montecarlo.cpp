#include "igfade/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "detail/common.hpp"
#include "igfade/fitting.hpp"
#include "igfade/kernels.hpp"
#include "igfade/shadowing.hpp"

namespace igfade {

double EmpiricalCdf::operator()(double t) const {
    const auto it = std::upper_bound(abscissa.begin(), abscissa.end(), t);
    if (it == abscissa.begin()) return 0.0;
    return value[static_cast<std::size_t>(it - abscissa.begin()) - 1];
}

namespace montecarlo {

std::vector<double> sample_composite(const CompositeModel& model, std::size_t count, std::uint64_t seed) {
    detail::require(count >= 1, "sample_composite: count must be at least 1");
    const std::vector<double> xi = shadowing::sample_inverse_gamma(model.m(), 1.0, count, seed);
    std::vector<double> w = fading::sample(model.baseline(), count, seed);
    kernels::scaled_product(xi, w, model.w_bar(), w);
    return w;
}

EmpiricalCdf empirical_cdf(std::span<const double> samples) {
    detail::require(!samples.empty(), "empirical_cdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double x : sorted) detail::require(!std::isnan(x), "empirical_cdf: NaN sample");
    std::sort(sorted.begin(), sorted.end());
    EmpiricalCdf out;
    out.sample_count = sorted.size();
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        // Duplicates collapse onto one abscissa carrying their cumulative weight.
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.abscissa.push_back(sorted[i]);
        out.value.push_back(static_cast<double>(i + 1) / n);
    }
    return out;
}

namespace {

// Theory tabulated at a subset of the eCDF abscissae and interpolated by a
// monotone cubic (Fritsch-Carlson), which never leaves [f_j, f_j+1] between nodes.
class NodeInterpolant {
public:
    NodeInterpolant(const EmpiricalCdf& ecdf, const std::function<double(double)>& theory, std::size_t nodes)
        : theory_(theory) {
        const std::size_t n = ecdf.size();
        const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(nodes, 2));
        for (std::size_t i = 0; i < n; i += stride) t_.push_back(ecdf.abscissa[i]);
        if (t_.back() != ecdf.abscissa.back()) t_.push_back(ecdf.abscissa.back());
        f_.reserve(t_.size());
        for (double t : t_) f_.push_back(theory(t));
        const std::size_t k = t_.size();
        std::vector<double> secant(k > 1 ? k - 1 : 0);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            secant[i] = (f_[i + 1] - f_[i]) / (t_[i + 1] - t_[i]);
            max_step_ = std::max(max_step_, f_[i + 1] - f_[i]);
        }
        slope_.assign(k, 0.0);
        if (k > 1) {
            slope_.front() = secant.front();
            slope_.back() = secant.back();
        }
        for (std::size_t i = 1; i + 1 < k; ++i) {
            if (secant[i - 1] * secant[i] > 0.0) {
                const double h0 = t_[i] - t_[i - 1], h1 = t_[i + 1] - t_[i];
                const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
                slope_[i] = (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i]);
            }
        }
    }

    double operator()(double t) const {
        if (t < t_.front() || t > t_.back()) return theory_(t);
        const auto it = std::upper_bound(t_.begin(), t_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - t_.begin());
        if (j == t_.size()) return f_.back();
        const double h = t_[j] - t_[j - 1];
        const double s = (t - t_[j - 1]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * f_[j - 1] + (s3 - 2 * s2 + s) * h * slope_[j - 1] +
               (-2 * s3 + 3 * s2) * f_[j] + (s3 - s2) * h * slope_[j];
    }
    /// Largest increase of the theory between neighbouring nodes.
    double max_step() const { return max_step_; }

private:
    const std::function<double(double)>& theory_;
    std::vector<double> t_;
    std::vector<double> f_;
    std::vector<double> slope_;
    double max_step_ = 0.0;
};

}  // namespace

Comparison compare(const EmpiricalCdf& ecdf, const std::function<double(double)>& theory, double support_pad,
                   std::size_t exact_nodes) {
    detail::require(ecdf.size() > 0, "compare: empty eCDF");
    const std::size_t n = ecdf.size();
    const bool exact = n <= exact_nodes;
    std::function<double(double)> eval = theory;
    Comparison out;
    std::vector<double> at(n), left(n), below(n);
    if (exact) {
        for (std::size_t i = 0; i < n; ++i) {
            at[i] = theory(ecdf.abscissa[i]);
            left[i] = theory(std::nextafter(ecdf.abscissa[i], -std::numeric_limits<double>::infinity()));
        }
    } else {
        const NodeInterpolant interp(ecdf, theory, exact_nodes);
        for (std::size_t i = 0; i < n; ++i) at[i] = interp(ecdf.abscissa[i]);
        left = at;
        out.sup_distance_bound = interp.max_step();
        eval = [interp = std::make_shared<NodeInterpolant>(interp)](double t) { return (*interp)(t); };
    }
    below[0] = 0.0;
    std::copy(ecdf.value.begin(), ecdf.value.end() - 1, below.begin() + 1);
    out.sup_distance = std::max(kernels::max_abs_diff(at, ecdf.value), kernels::max_abs_diff(left, below));
    out.cvm = fitting::cvm_statistic(ecdf, eval, support_pad);
    return out;
}

}  // namespace montecarlo
}  // namespace igfade
