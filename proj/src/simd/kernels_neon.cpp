#include "kernels_internal.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#endif

namespace pka::simd::detail {

#if defined(__aarch64__) && defined(__ARM_NEON)
namespace {

double sum(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    float64x2_t a2 = vdupq_n_f64(0.0);
    float64x2_t a3 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
        a2 = vaddq_f64(a2, vld1q_f64(x + i + 4));
        a3 = vaddq_f64(a3, vld1q_f64(x + i + 6));
    }
    for (; i + 2 <= n; i += 2) a0 = vaddq_f64(a0, vld1q_f64(x + i));
    double s = vaddvq_f64(vaddq_f64(vaddq_f64(a0, a1), vaddq_f64(a2, a3)));
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev(const double* x, std::size_t n, double mean) {
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(x + i), m);
        const float64x2_t d1 = vsubq_f64(vld1q_f64(x + i + 2), m);
        a0 = vaddq_f64(a0, vmulq_f64(d0, d0));
        a1 = vaddq_f64(a1, vmulq_f64(d1, d1));
    }
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), m);
        a0 = vaddq_f64(a0, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

void sum_pairs(const double* xy, std::size_t n, double* sx, double* sy) {
    // One pair per register: lane 0 is x, lane 1 is y.
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        a0 = vaddq_f64(a0, vld1q_f64(xy + 2 * i));
        a1 = vaddq_f64(a1, vld1q_f64(xy + 2 * i + 2));
    }
    float64x2_t a = vaddq_f64(a0, a1);
    for (; i < n; ++i) a = vaddq_f64(a, vld1q_f64(xy + 2 * i));
    *sx = vgetq_lane_f64(a, 0);
    *sy = vgetq_lane_f64(a, 1);
}

double sum_cross_dev(const double* xy, std::size_t n, double mean_x, double mean_y) {
    const double means[2] = {mean_x, mean_y};
    const float64x2_t m = vld1q_f64(means);
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(xy + 2 * i), m);
        const float64x2_t d1 = vsubq_f64(vld1q_f64(xy + 2 * i + 2), m);
        a0 = vaddq_f64(a0, vmulq_f64(d0, vextq_f64(d0, d0, 1)));
        a1 = vaddq_f64(a1, vmulq_f64(d1, vextq_f64(d1, d1, 1)));
    }
    double s = vgetq_lane_f64(vaddq_f64(a0, a1), 0);
    for (; i < n; ++i) s += (xy[2 * i] - mean_x) * (xy[2 * i + 1] - mean_y);
    return s;
}

constexpr KernelTable kNeon{&sum, &sum_sq_dev, &sum_pairs, &sum_cross_dev};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace pka::simd::detail
