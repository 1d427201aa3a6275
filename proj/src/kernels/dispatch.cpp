#include "igfade/errors.hpp"
#include "igfade/kernels.hpp"

namespace igfade::kernels {

namespace {

struct Table {
    Isa isa;
    void (*scaled_product)(std::span<const double>, std::span<const double>, double, std::span<double>);
    double (*max_abs_diff)(std::span<const double>, std::span<const double>);
    double (*weighted_squared_diff)(std::span<const double>, std::span<const double>,
                                    std::span<const double>);
    double (*sum)(std::span<const double>);
};

bool cpu_has_avx2() {
#if defined(IGFADE_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table& table() {
    static const Table selected = [] {
#if defined(IGFADE_HAVE_AVX2)
        if (cpu_has_avx2()) {
            return Table{Isa::Avx2, avx2::scaled_product, avx2::max_abs_diff,
                         avx2::weighted_squared_diff, avx2::sum};
        }
#endif
        return Table{Isa::Scalar, scalar::scaled_product, scalar::max_abs_diff,
                     scalar::weighted_squared_diff, scalar::sum};
    }();
    return selected;
}

}  // namespace

#if !defined(IGFADE_HAVE_AVX2)
// Stubs so the avx2 namespace links on builds without the variant.
namespace avx2 {
[[noreturn]] static void unavailable() { throw UnsupportedError("AVX2 kernels not compiled in"); }
void scaled_product(std::span<const double>, std::span<const double>, double, std::span<double>) {
    unavailable();
}
double max_abs_diff(std::span<const double>, std::span<const double>) { unavailable(); }
double weighted_squared_diff(std::span<const double>, std::span<const double>, std::span<const double>) {
    unavailable();
}
double sum(std::span<const double>) { unavailable(); }
}  // namespace avx2
#endif

Isa active_isa() { return table().isa; }

bool avx2_available() { return cpu_has_avx2(); }

void scaled_product(std::span<const double> a, std::span<const double> b, double scale,
                    std::span<double> out) {
    table().scaled_product(a, b, scale, out);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return table().max_abs_diff(a, b);
}

double weighted_squared_diff(std::span<const double> w, std::span<const double> a,
                             std::span<const double> b) {
    return table().weighted_squared_diff(w, a, b);
}

double sum(std::span<const double> a) { return table().sum(a); }

}  // namespace igfade::kernels
