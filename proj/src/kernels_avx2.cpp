// AVX2 variants of the reduction kernels. Compiled with -mavx2 -mfma; only
// reached through the dispatcher after a CPU capability check.

#include "hpt/kernels.hpp"

#if defined(HPT_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>

namespace hpt::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

}  // namespace

double sum(std::span<const double> x) {
    const size_t n = x.size();
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(&x[i]));
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return hsum(acc) + tail;
}

double dot(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum(acc) + tail;
}

PairMoments pair_moments(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    __m256d sx = _mm256_setzero_pd(), sy = _mm256_setzero_pd();
    __m256d sxx = _mm256_setzero_pd(), syy = _mm256_setzero_pd(), sxy = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(&x[i]);
        const __m256d b = _mm256_loadu_pd(&y[i]);
        sx = _mm256_add_pd(sx, a);
        sy = _mm256_add_pd(sy, b);
        sxx = _mm256_fmadd_pd(a, a, sxx);
        syy = _mm256_fmadd_pd(b, b, syy);
        sxy = _mm256_fmadd_pd(a, b, sxy);
    }
    PairMoments m;
    m.sum_x = hsum(sx);
    m.sum_y = hsum(sy);
    m.sum_xx = hsum(sxx);
    m.sum_yy = hsum(syy);
    m.sum_xy = hsum(sxy);
    for (; i < n; ++i) {
        const double a = x[i], b = y[i];
        m.sum_x += a;
        m.sum_y += b;
        m.sum_xx += a * a;
        m.sum_yy += b * b;
        m.sum_xy += a * b;
    }
    return m;
}

double abs_adjacent_sum(std::span<const double> x) {
    const size_t n = x.size();
    if (n < 2) return 0.0;
    __m256d acc = _mm256_setzero_pd();
    size_t t = 1;
    for (; t + 4 <= n; t += 4) {
        const __m256d cur = abs_pd(_mm256_loadu_pd(&x[t]));
        const __m256d prev = abs_pd(_mm256_loadu_pd(&x[t - 1]));
        acc = _mm256_fmadd_pd(cur, prev, acc);
    }
    double tail = 0.0;
    for (; t < n; ++t) tail += std::fabs(x[t]) * std::fabs(x[t - 1]);
    return hsum(acc) + tail;
}

}  // namespace hpt::kernels::avx2

#endif  // HPT_HAVE_AVX2_KERNELS
