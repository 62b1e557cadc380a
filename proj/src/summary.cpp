#include "pka/summary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pka/errors.hpp"
#include "pka/simd/kernels.hpp"

namespace pka {
namespace {

// Cancellation in m2 is bounded by the magnitude n·mean², so anything more
// negative than this relative allowance is corruption rather than rounding.
constexpr double kNegativeAllowance = 1e-12;

double negative_tolerance(std::int64_t n, double mean) {
    return kNegativeAllowance * static_cast<double>(n) * mean * mean;
}

double checked_m2(std::int64_t n, double mean, double m2) {
    if (m2 >= 0.0) return m2;
    if (m2 >= -negative_tolerance(n, mean)) return 0.0;
    throw CorruptSummary("second moment " + std::to_string(m2) + " is negative beyond rounding");
}

double square(double v) { return v * v; }

}  // namespace

MomentSummary MomentSummary::from_moments(std::int64_t n, double mean, double m2) {
    if (n < 0) throw std::invalid_argument("summary count must be nonnegative");
    if (!std::isfinite(mean) || !std::isfinite(m2)) {
        throw std::invalid_argument("summary fields must be finite");
    }
    if (n == 0 && (mean != 0.0 || m2 != 0.0)) {
        throw std::invalid_argument("empty summary must have zero mean and m2");
    }
    if (m2 < -negative_tolerance(n, mean)) {
        throw CorruptSummary("second moment " + std::to_string(m2) + " is negative beyond rounding");
    }
    return MomentSummary(n, mean, m2);
}

double MomentSummary::population_variance() const {
    if (n_ < 1) throw StatisticUndefined("population variance needs at least one observation");
    return checked_m2(n_, mean_, m2_) / static_cast<double>(n_);
}

double MomentSummary::sample_variance() const {
    if (n_ < 2) throw StatisticUndefined("sample variance needs at least two observations");
    return checked_m2(n_, mean_, m2_) / static_cast<double>(n_ - 1);
}

MomentSummary summarize(std::span<const double> data) {
    if (data.empty()) return {};
    const auto n = static_cast<std::int64_t>(data.size());
    const double mean = simd::sum(data) / static_cast<double>(n);
    return MomentSummary(n, mean, simd::sum_sq_dev(data, mean));
}

MomentSummary merge_population(const MomentSummary& s1, const MomentSummary& s2) {
    if (s2.empty()) return s1;
    if (s1.empty()) return s2;
    const std::int64_t n = s1.n_ + s2.n_;
    const double n1 = static_cast<double>(s1.n_);
    const double n2 = static_cast<double>(s2.n_);
    const double mean = (n1 * s1.mean_ + n2 * s2.mean_) / static_cast<double>(n);
    const double shift = n1 * square(s1.mean_ - mean) + n2 * square(s2.mean_ - mean);
    return MomentSummary(n, mean, (s1.m2_ + s2.m2_) + shift);
}

MomentSummary merge_sample(const MomentSummary& s1, const MomentSummary& s2) {
    return merge_population(s1, s2);
}

RemainderReport remainder_population(const MomentSummary& s1, const MomentSummary& s2) {
    if (s1.empty() || s2.empty()) {
        throw StatisticUndefined("remainder needs both variances; an operand is empty");
    }
    const double n1 = static_cast<double>(s1.count());
    const double n2 = static_cast<double>(s2.count());
    const double n = n1 + n2;
    const double var1 = s1.population_variance();
    const double var2 = s2.population_variance();
    const double mean = (n1 * s1.mean() + n2 * s2.mean()) / n;
    const double r =
        (n2 * (var2 - var1) + n1 * square(s1.mean() - mean) + n2 * square(s2.mean() - mean)) / n;
    return {r, var1 + r};
}

RemainderReport remainder_sample(const MomentSummary& s1, const MomentSummary& s2) {
    if (s1.count() < 2 || s2.count() < 2) {
        throw StatisticUndefined("sample remainder needs at least two observations per operand");
    }
    const double n1 = static_cast<double>(s1.count());
    const double n2 = static_cast<double>(s2.count());
    const double n = n1 + n2;
    const double var1 = s1.sample_variance();
    const double var2 = s2.sample_variance();
    const double mean = (n1 * s1.mean() + n2 * s2.mean()) / n;
    const double r = ((n2 - 1.0) * var2 - n2 * var1 + n1 * square(s1.mean() - mean) +
                      n2 * square(s2.mean() - mean)) /
                     (n - 1.0);
    return {r, var1 + r};
}

MomentSummary ross_update(const MomentSummary& s, double x) {
    if (s.empty()) throw StatisticUndefined("recurrence needs an existing mean");
    const std::int64_t j = s.n_;
    const double jd = static_cast<double>(j);
    const double mean = s.mean_ + (x - s.mean_) / (jd + 1.0);
    const double var = j >= 2 ? s.m2_ / (jd - 1.0) : 0.0;
    const double next_var = (1.0 - 1.0 / jd) * var + (jd + 1.0) * square(mean - s.mean_);
    return MomentSummary(j + 1, mean, next_var * jd);
}

CovarianceSummary CovarianceSummary::from_moments(std::int64_t n, double mean_x, double mean_y,
                                                  double c2) {
    if (n < 0) throw std::invalid_argument("summary count must be nonnegative");
    if (!std::isfinite(mean_x) || !std::isfinite(mean_y) || !std::isfinite(c2)) {
        throw std::invalid_argument("summary fields must be finite");
    }
    if (n == 0 && (mean_x != 0.0 || mean_y != 0.0 || c2 != 0.0)) {
        throw std::invalid_argument("empty summary must have zero means and c2");
    }
    return CovarianceSummary(n, mean_x, mean_y, c2);
}

double CovarianceSummary::covariance() const {
    if (n_ < 1) throw StatisticUndefined("covariance needs at least one observation pair");
    return c2_ / static_cast<double>(n_);
}

static_assert(sizeof(Point2) == 2 * sizeof(double), "Point2 must be two packed doubles");

CovarianceSummary summarize_pairs(std::span<const Point2> data) {
    if (data.empty()) return {};
    const auto* xy = reinterpret_cast<const double*>(data.data());
    const simd::KernelTable& k = simd::active_table();
    double sx = 0.0;
    double sy = 0.0;
    k.sum_pairs(xy, data.size(), &sx, &sy);
    const auto n = static_cast<std::int64_t>(data.size());
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    return CovarianceSummary(n, mx, my, k.sum_cross_dev(xy, data.size(), mx, my));
}

CovarianceSummary merge_covariance(const CovarianceSummary& c1, const CovarianceSummary& c2) {
    if (c2.empty()) return c1;
    if (c1.empty()) return c2;
    const std::int64_t n = c1.n_ + c2.n_;
    const double n1 = static_cast<double>(c1.n_);
    const double n2 = static_cast<double>(c2.n_);
    const double nd = static_cast<double>(n);
    const double mx = (n1 * c1.mean_x_ + n2 * c2.mean_x_) / nd;
    const double my = (n1 * c1.mean_y_ + n2 * c2.mean_y_) / nd;
    const double shift = n1 * (c1.mean_x_ - mx) * (c1.mean_y_ - my) +
                         n2 * (c2.mean_x_ - mx) * (c2.mean_y_ - my);
    return CovarianceSummary(n, mx, my, (c1.c2_ + c2.c2_) + shift);
}

}  // namespace pka
