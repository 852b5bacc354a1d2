// AVX2 kernel variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here runs unless the dispatcher confirmed CPU support.

#include "pumpscan/kernels.hpp"

#if defined(PUMPSCAN_HAVE_AVX2_KERNELS)

#include <immintrin.h>

namespace pumpscan::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double sum(std::span<const double> x) noexcept {
    const double* p = x.data();
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += p[i];
    return acc;
}

double dot(std::span<const double> p, std::span<const double> q) noexcept {
    const double* a = p.data();
    const double* b = q.data();
    const std::size_t n = p.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double min(std::span<const double> x) noexcept {
    const double* p = x.data();
    const std::size_t n = x.size();
    std::size_t i = 0;
    double best = p[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(p);
        for (i = 4; i + 4 <= n; i += 4) {
            acc = _mm256_min_pd(acc, _mm256_loadu_pd(p + i));
        }
        __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        best = _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
    } else {
        i = 1;
    }
    for (; i < n; ++i) {
        if (p[i] < best) best = p[i];
    }
    return best;
}

double max(std::span<const double> x) noexcept {
    const double* p = x.data();
    const std::size_t n = x.size();
    std::size_t i = 0;
    double best = p[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(p);
        for (i = 4; i + 4 <= n; i += 4) {
            acc = _mm256_max_pd(acc, _mm256_loadu_pd(p + i));
        }
        __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        best = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    } else {
        i = 1;
    }
    for (; i < n; ++i) {
        if (p[i] > best) best = p[i];
    }
    return best;
}

double masked_sum(std::span<const double> x, std::span<const std::uint8_t> flag,
                  std::uint8_t want) noexcept {
    const double* p = x.data();
    const std::uint8_t* f = flag.data();
    const std::size_t n = x.size();
    const __m256i want4 = _mm256_set1_epi64x(static_cast<long long>(want));
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // widen four flag bytes to 64-bit lanes, compare, keep matching lanes
        std::uint32_t packed;
        __builtin_memcpy(&packed, f + i, 4);
        __m256i lanes = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
        __m256d mask = _mm256_castsi256_pd(_mm256_cmpeq_epi64(lanes, want4));
        acc0 = _mm256_add_pd(acc0, _mm256_and_pd(mask, _mm256_loadu_pd(p + i)));
    }
    double acc = hsum(acc0);
    for (; i < n; ++i) {
        if (f[i] == want) acc += p[i];
    }
    return acc;
}

}  // namespace pumpscan::kernels::avx2

#endif  // PUMPSCAN_HAVE_AVX2_KERNELS
