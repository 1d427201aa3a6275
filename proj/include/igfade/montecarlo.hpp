#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "igfade/composite.hpp"

namespace igfade {

/// Step eCDF: value[i] is the fraction of samples <= abscissa[i].
struct EmpiricalCdf {
    std::vector<double> abscissa;  ///< strictly increasing
    std::vector<double> value;     ///< nondecreasing, last entry 1
    std::size_t sample_count = 0;

    std::size_t size() const noexcept { return abscissa.size(); }
    /// F-hat(t) for any real t.
    double operator()(double t) const;
};

struct Comparison {
    double sup_distance = 0.0;
    /// Upper bound on how far the reported sup-distance can be from the exact one
    /// when the theory was interpolated between quantile nodes (0 otherwise).
    double sup_distance_bound = 0.0;
    double cvm = 0.0;
};

namespace montecarlo {

inline constexpr std::size_t kDefaultSampleCount = 1'000'000;

/// W = w_bar * xi * X with xi ~ IG(m, mean 1) and X from the normalized baseline.
/// The two factors come from separate substreams of `seed`.
std::vector<double> sample_composite(const CompositeModel& model, std::size_t count, std::uint64_t seed);

EmpiricalCdf empirical_cdf(std::span<const double> samples);

/// Sup-distance and Cramer-von Mises integral between an eCDF and a theoretical CDF.
/// For more than `exact_nodes` abscissae the theory is evaluated on that many eCDF
/// quantiles and interpolated by a monotone cubic in between; monotonicity of the theory
/// bounds the resulting error, reported in sup_distance_bound.
Comparison compare(const EmpiricalCdf& ecdf, const std::function<double(double)>& theory, double support_pad = 5.0,
                   std::size_t exact_nodes = 20000);

}  // namespace montecarlo
}  // namespace igfade
