#pragma once

// General merge decomposition: a statistic f is mergeable when
//
//     f(D1 ++ D2) = A(n1, n2)·f(D1) + B(n1, n2)·f(D2) + g(D1, D2)
//
// This is a verification and extension surface. The specialized merges in
// summary.hpp do not route through it.

#include <cstdint>
#include <functional>
#include <string>

#include "pka/summary.hpp"

namespace pka {

template <typename Summary>
struct PkaDecomposition {
    std::string name;
    std::function<double(std::int64_t n1, std::int64_t n2)> coefficient_a;
    std::function<double(std::int64_t n1, std::int64_t n2)> coefficient_b;
    std::function<double(const Summary&, const Summary&)> remainder_g;
    // Throws StatisticUndefined for summaries that do not define it.
    std::function<double(const Summary&)> statistic;
    std::function<Summary(const Summary&, const Summary&)> merge;
};

struct Addends {
    double a_term = 0.0;  // A·f(D1)
    double b_term = 0.0;  // B·f(D2)
    double g = 0.0;

    [[nodiscard]] double total() const noexcept { return a_term + b_term + g; }
};

template <typename Summary>
Addends decompose_check(const PkaDecomposition<Summary>& inst, const Summary& s1,
                        const Summary& s2) {
    const double f1 = inst.statistic(s1);
    const double f2 = inst.statistic(s2);
    const double a = inst.coefficient_a(s1.count(), s2.count());
    const double b = inst.coefficient_b(s1.count(), s2.count());
    return {a * f1, b * f2, inst.remainder_g(s1, s2)};
}

// f = population variance, A = n1/N, B = n2/N,
// g = (n1(μ1-μ)² + n2(μ2-μ)²)/N.
PkaDecomposition<MomentSummary> population_variance_instance();

// f = mean, A = n1/N, B = n2/N, g ≡ 0.
PkaDecomposition<MomentSummary> mean_instance();

// f = covariance, A = n1/N, B = n2/N,
// g = n1/N (μx1-μx)(μy1-μy) + n2/N (μx2-μx)(μy2-μy).
PkaDecomposition<CovarianceSummary> covariance_instance();

struct Effectiveness {
    double tau = 0.0;
    bool beneficial = false;  // tau > 1
};

// tau = A · numerator / denominator where numerator is the time saved on f(D1)
// and denominator the extra time spent on g. Throws FactorUndefined when the
// denominator is zero.
Effectiveness generic_effectiveness(double numerator, double denominator,
                                    double coefficient_a = 1.0);

}  // namespace pka
