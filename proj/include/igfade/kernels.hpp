#pragma once

#include <cstddef>
#include <span>

// Data-parallel loops on the Monte Carlo and goodness-of-fit hot paths.
// Each kernel has a scalar reference and, on x86-64, an AVX2 variant chosen
// once at runtime. Reductions may differ from the scalar reference in the
// last bits because the summation order changes.

namespace igfade::kernels {

enum class Isa { Scalar, Avx2 };

/// Instruction set the dispatched kernels use on this machine.
Isa active_isa();
/// True when the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available();

/// out[i] = scale * a[i] * b[i]. `out` may alias `a` or `b`.
void scaled_product(std::span<const double> a, std::span<const double> b, double scale,
                    std::span<double> out);
/// max_i |a[i] - b[i]|; 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// sum_i w[i] * (a[i] - b[i])^2.
double weighted_squared_diff(std::span<const double> w, std::span<const double> a,
                             std::span<const double> b);
double sum(std::span<const double> a);

namespace scalar {
void scaled_product(std::span<const double> a, std::span<const double> b, double scale,
                    std::span<double> out);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double weighted_squared_diff(std::span<const double> w, std::span<const double> a,
                             std::span<const double> b);
double sum(std::span<const double> a);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available() is true.
void scaled_product(std::span<const double> a, std::span<const double> b, double scale,
                    std::span<double> out);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double weighted_squared_diff(std::span<const double> w, std::span<const double> a,
                             std::span<const double> b);
double sum(std::span<const double> a);
}  // namespace avx2

}  // namespace igfade::kernels
