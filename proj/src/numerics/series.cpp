#include <cmath>

#include "igfade/numerics.hpp"

namespace igfade {

void Tolerance::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_terms < 1 || max_subdivisions < 1) {
        throw DomainError("Tolerance: requires rel_tol > 0, abs_tol >= 0 and positive limits");
    }
}

namespace numerics {

SeriesSum sum_series(const std::function<double(std::size_t)>& term, const Tolerance& tol) {
    tol.validate();
    constexpr int kQuietRun = 3;
    double sum = 0.0;
    double comp = 0.0;
    int quiet = 0;
    for (std::size_t k = 0; k < tol.max_terms; ++k) {
        const double t = term(k);
        const double s = sum + t;
        comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
        const double total = sum + comp;
        const bool small = std::abs(t) <= tol.rel_tol * std::abs(total) || (total == 0.0 && t == 0.0);
        quiet = small ? quiet + 1 : 0;
        if (quiet == kQuietRun) return {total, k + 1};
    }
    throw ConvergenceError("sum_series: max_terms reached before convergence", sum + comp, 0.0);
}

}  // namespace numerics
}  // namespace igfade
