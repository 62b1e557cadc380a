#pragma once

// Mergeable moment summaries.
//
// A MomentSummary holds (count, mean, m2) where m2 = Σ(x - mean)^2. Two
// summaries of disjoint data merge into the summary of the concatenation
// without touching the raw values; the empty summary is the merge identity.
// Variances are only extracted on request, so m2 never needs a division.
//
// CovarianceSummary is the paired (x, y) analogue with c2 = Σ(x-mx)(y-my).
//
// All types are plain values; every operation is a pure function.

#include <cstdint>
#include <span>

namespace pka {

class MomentSummary {
public:
    constexpr MomentSummary() = default;

    // Validating constructor. Rejects negative counts, nonzero moments on an
    // empty summary, non-finite fields, and m2 below the rounding allowance.
    static MomentSummary from_moments(std::int64_t n, double mean, double m2);

    [[nodiscard]] constexpr std::int64_t count() const noexcept { return n_; }
    [[nodiscard]] constexpr double mean() const noexcept { return mean_; }
    [[nodiscard]] constexpr double m2() const noexcept { return m2_; }
    [[nodiscard]] constexpr bool empty() const noexcept { return n_ == 0; }

    // m2 / n; needs n >= 1.
    [[nodiscard]] double population_variance() const;
    // m2 / (n - 1); needs n >= 2.
    [[nodiscard]] double sample_variance() const;

    friend constexpr bool operator==(const MomentSummary&, const MomentSummary&) = default;

private:
    friend MomentSummary merge_population(const MomentSummary&, const MomentSummary&);
    friend MomentSummary ross_update(const MomentSummary&, double);
    friend MomentSummary summarize(std::span<const double>);

    constexpr MomentSummary(std::int64_t n, double mean, double m2) : n_(n), mean_(mean), m2_(m2) {}

    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

class CovarianceSummary {
public:
    constexpr CovarianceSummary() = default;

    static CovarianceSummary from_moments(std::int64_t n, double mean_x, double mean_y, double c2);

    [[nodiscard]] constexpr std::int64_t count() const noexcept { return n_; }
    [[nodiscard]] constexpr double mean_x() const noexcept { return mean_x_; }
    [[nodiscard]] constexpr double mean_y() const noexcept { return mean_y_; }
    [[nodiscard]] constexpr double c2() const noexcept { return c2_; }
    [[nodiscard]] constexpr bool empty() const noexcept { return n_ == 0; }

    // c2 / n; needs n >= 1.
    [[nodiscard]] double covariance() const;

    friend constexpr bool operator==(const CovarianceSummary&, const CovarianceSummary&) = default;

private:
    friend CovarianceSummary merge_covariance(const CovarianceSummary&, const CovarianceSummary&);
    friend CovarianceSummary summarize_pairs(std::span<const Point2>);

    constexpr CovarianceSummary(std::int64_t n, double mx, double my, double c2)
        : n_(n), mean_x_(mx), mean_y_(my), c2_(c2) {}

    std::int64_t n_ = 0;
    double mean_x_ = 0.0;
    double mean_y_ = 0.0;
    double c2_ = 0.0;
};

// Updated statistic expressed as original + remainder.
struct RemainderReport {
    double remainder = 0.0;
    double merged = 0.0;
};

// Two-pass summary: mean first, then Σ(x - mean)^2. Runs on the active
// SIMD backend.
MomentSummary summarize(std::span<const double> data);

// Summary of concat(d1, d2) from the summaries of d1 and d2. The merged mean
// is the count-weighted mean; m2 gains n1(μ1-μ)^2 + n2(μ2-μ)^2.
MomentSummary merge_population(const MomentSummary& s1, const MomentSummary& s2);

// Same representation-level merge as merge_population; read the result with
// sample_variance().
MomentSummary merge_sample(const MomentSummary& s1, const MomentSummary& s2);

// R = σ²(D) - σ²(D1), computed from the prior variances and means directly:
//   R = (n2(σ2² - σ1²) + n1(μ1-μ)² + n2(μ2-μ)²) / N
// `merged` is σ1² + R. Both operands need n >= 1.
RemainderReport remainder_population(const MomentSummary& s1, const MomentSummary& s2);

// R = S²(D) - S²(D1):
//   R = ((n2-1)S2² - n2 S1² + n1(μ1-μ)² + n2(μ2-μ)²) / (N-1)
// Both operands need n >= 2.
RemainderReport remainder_sample(const MomentSummary& s1, const MomentSummary& s2);

// Single-observation recurrence:
//   x̄' = x̄ + (x - x̄)/(j+1)
//   s'² = (1 - 1/j) s² + (j+1)(x̄' - x̄)²
// with j = s.count() >= 1 (s² is taken as 0 when j == 1).
MomentSummary ross_update(const MomentSummary& s, double x);

CovarianceSummary summarize_pairs(std::span<const Point2> data);

// N·Cov = n1·Cov1 + n1(μx1-μx)(μy1-μy) + n2·Cov2 + n2(μx2-μx)(μy2-μy)
CovarianceSummary merge_covariance(const CovarianceSummary& c1, const CovarianceSummary& c2);

}  // namespace pka
