#pragma once

#include <cmath>

#include "igfade/errors.hpp"

namespace igfade::detail {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

inline bool positive(double x) { return x > 0.0 && std::isfinite(x); }

/// ln of the gamma density with shape k and mean omega at x > 0.
inline double log_gamma_pdf(double k, double omega, double x) {
    const double rate = k / omega;
    return k * std::log(rate) - std::lgamma(k) + (k - 1.0) * std::log(x) - rate * x;
}

}  // namespace igfade::detail
