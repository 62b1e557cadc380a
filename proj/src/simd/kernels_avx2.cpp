#include "kernels_internal.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace pka::simd::detail {

#if defined(__AVX2__)
namespace {

// Four independent accumulators of four lanes hide the add latency.
constexpr std::size_t kLanes = 4;
constexpr std::size_t kStride = 4 * kLanes;

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Reduction for interleaved pair accumulators: lanes [x, y, x, y].
inline void hsum_pairs(__m256d v, double* even, double* odd) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    *even = lanes[0] + lanes[2];
    *odd = lanes[1] + lanes[3];
}

double sum(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kStride <= n; i += kStride) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
        a2 = _mm256_add_pd(a2, _mm256_loadu_pd(x + i + 8));
        a3 = _mm256_add_pd(a3, _mm256_loadu_pd(x + i + 12));
    }
    for (; i + kLanes <= n; i += kLanes) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kStride <= n; i += kStride) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), m);
        const __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 8), m);
        const __m256d d3 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 12), m);
        a0 = _mm256_add_pd(a0, _mm256_mul_pd(d0, d0));
        a1 = _mm256_add_pd(a1, _mm256_mul_pd(d1, d1));
        a2 = _mm256_add_pd(a2, _mm256_mul_pd(d2, d2));
        a3 = _mm256_add_pd(a3, _mm256_mul_pd(d3, d3));
    }
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        a0 = _mm256_add_pd(a0, _mm256_mul_pd(d, d));
    }
    double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

void sum_pairs(const double* xy, std::size_t n, double* sx, double* sy) {
    const std::size_t len = 2 * n;
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(xy + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(xy + i + 4));
    }
    for (; i + 4 <= len; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(xy + i));
    double a = 0.0;
    double b = 0.0;
    hsum_pairs(_mm256_add_pd(a0, a1), &a, &b);
    for (; i < len; i += 2) {
        a += xy[i];
        b += xy[i + 1];
    }
    *sx = a;
    *sy = b;
}

double sum_cross_dev(const double* xy, std::size_t n, double mean_x, double mean_y) {
    const std::size_t len = 2 * n;
    const __m256d m = _mm256_setr_pd(mean_x, mean_y, mean_x, mean_y);
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    // d * swap(d) puts dx*dy in every lane; lanes 0 and 2 are kept.
    for (; i + 8 <= len; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(xy + i), m);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(xy + i + 4), m);
        a0 = _mm256_add_pd(a0, _mm256_mul_pd(d0, _mm256_permute_pd(d0, 0b0101)));
        a1 = _mm256_add_pd(a1, _mm256_mul_pd(d1, _mm256_permute_pd(d1, 0b0101)));
    }
    for (; i + 4 <= len; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xy + i), m);
        a0 = _mm256_add_pd(a0, _mm256_mul_pd(d, _mm256_permute_pd(d, 0b0101)));
    }
    double s = 0.0;
    double unused = 0.0;
    hsum_pairs(_mm256_add_pd(a0, a1), &s, &unused);
    for (; i < len; i += 2) s += (xy[i] - mean_x) * (xy[i + 1] - mean_y);
    return s;
}

constexpr KernelTable kAvx2{&sum, &sum_sq_dev, &sum_pairs, &sum_cross_dev};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace pka::simd::detail
