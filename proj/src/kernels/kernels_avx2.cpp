#include <immintrin.h>

#include <cmath>

#include "igfade/errors.hpp"
#include "igfade/kernels.hpp"

namespace igfade::kernels::avx2 {

namespace {

double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double horizontal_max(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

void scaled_product(std::span<const double> a, std::span<const double> b, double scale,
                    std::span<double> out) {
    if (a.size() != b.size() || a.size() != out.size()) {
        throw DomainError("scaled_product: length mismatch");
    }
    const std::size_t n = a.size();
    const __m256d s = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // Same association as the scalar loop, (scale * a) * b, so results are bit-identical.
        const __m256d prod = _mm256_mul_pd(_mm256_mul_pd(s, _mm256_loadu_pd(a.data() + i)),
                                           _mm256_loadu_pd(b.data() + i));
        _mm256_storeu_pd(out.data() + i, prod);
    }
    for (; i < n; ++i) out[i] = scale * a[i] * b[i];
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("max_abs_diff: length mismatch");
    const std::size_t n = a.size();
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        best = _mm256_max_pd(best, _mm256_and_pd(d, kAbsMask));
    }
    double result = horizontal_max(best);
    for (; i < n; ++i) result = std::fmax(result, std::abs(a[i] - b[i]));
    return result;
}

double weighted_squared_diff(std::span<const double> w, std::span<const double> a,
                             std::span<const double> b) {
    if (w.size() != a.size() || a.size() != b.size()) {
        throw DomainError("weighted_squared_diff: length mismatch");
    }
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        const __m256d d1 =
            _mm256_sub_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4));
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w.data() + i), d0), d0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w.data() + i + 4), d1), d1, acc1);
    }
    double result = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        result += w[i] * d * d;
    }
    return result;
}

double sum(std::span<const double> a) {
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a.data() + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a.data() + i + 4));
    }
    double result = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) result += a[i];
    return result;
}

}  // namespace igfade::kernels::avx2
