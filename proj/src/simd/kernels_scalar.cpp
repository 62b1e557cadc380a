#include "kernels_internal.hpp"

namespace pka::simd::detail {
namespace {

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev(const double* x, std::size_t n, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

void sum_pairs(const double* xy, std::size_t n, double* sx, double* sy) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a += xy[2 * i];
        b += xy[2 * i + 1];
    }
    *sx = a;
    *sy = b;
}

double sum_cross_dev(const double* xy, std::size_t n, double mean_x, double mean_y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += (xy[2 * i] - mean_x) * (xy[2 * i + 1] - mean_y);
    }
    return s;
}

constexpr KernelTable kScalar{&sum, &sum_sq_dev, &sum_pairs, &sum_cross_dev};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace pka::simd::detail
