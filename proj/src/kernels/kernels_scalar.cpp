#include <cmath>

#include "igfade/errors.hpp"
#include "igfade/kernels.hpp"

namespace igfade::kernels::scalar {

void scaled_product(std::span<const double> a, std::span<const double> b, double scale,
                    std::span<double> out) {
    if (a.size() != b.size() || a.size() != out.size()) {
        throw DomainError("scaled_product: length mismatch");
    }
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = scale * a[i] * b[i];
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("max_abs_diff: length mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::fmax(best, std::abs(a[i] - b[i]));
    return best;
}

double weighted_squared_diff(std::span<const double> w, std::span<const double> a,
                             std::span<const double> b) {
    if (w.size() != a.size() || a.size() != b.size()) {
        throw DomainError("weighted_squared_diff: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += w[i] * d * d;
    }
    return acc;
}

double sum(std::span<const double> a) {
    double acc = 0.0;
    for (double x : a) acc += x;
    return acc;
}

}  // namespace igfade::kernels::scalar
