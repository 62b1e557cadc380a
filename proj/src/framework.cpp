#include "pka/framework.hpp"

#include <cmath>

#include "pka/errors.hpp"

namespace pka {
namespace {

double share_first(std::int64_t n1, std::int64_t n2) {
    return static_cast<double>(n1) / static_cast<double>(n1 + n2);
}

double share_second(std::int64_t n1, std::int64_t n2) {
    return static_cast<double>(n2) / static_cast<double>(n1 + n2);
}

double merged_mean(double n1, double mean1, double n2, double mean2) {
    return (n1 * mean1 + n2 * mean2) / (n1 + n2);
}

}  // namespace

PkaDecomposition<MomentSummary> population_variance_instance() {
    return {
        "population_variance",
        &share_first,
        &share_second,
        [](const MomentSummary& s1, const MomentSummary& s2) {
            const double n1 = static_cast<double>(s1.count());
            const double n2 = static_cast<double>(s2.count());
            const double mu = merged_mean(n1, s1.mean(), n2, s2.mean());
            const double d1 = s1.mean() - mu;
            const double d2 = s2.mean() - mu;
            return (n1 * d1 * d1 + n2 * d2 * d2) / (n1 + n2);
        },
        [](const MomentSummary& s) { return s.population_variance(); },
        &merge_population,
    };
}

PkaDecomposition<MomentSummary> mean_instance() {
    return {
        "mean",
        &share_first,
        &share_second,
        [](const MomentSummary&, const MomentSummary&) { return 0.0; },
        [](const MomentSummary& s) {
            if (s.empty()) throw StatisticUndefined("mean of an empty summary");
            return s.mean();
        },
        &merge_population,
    };
}

PkaDecomposition<CovarianceSummary> covariance_instance() {
    return {
        "covariance",
        &share_first,
        &share_second,
        [](const CovarianceSummary& c1, const CovarianceSummary& c2) {
            const double n1 = static_cast<double>(c1.count());
            const double n2 = static_cast<double>(c2.count());
            const double a = n1 / (n1 + n2);
            const double b = n2 / (n1 + n2);
            const double mx = merged_mean(n1, c1.mean_x(), n2, c2.mean_x());
            const double my = merged_mean(n1, c1.mean_y(), n2, c2.mean_y());
            return a * (c1.mean_x() - mx) * (c1.mean_y() - my) +
                   b * (c2.mean_x() - mx) * (c2.mean_y() - my);
        },
        [](const CovarianceSummary& c) { return c.covariance(); },
        &merge_covariance,
    };
}

Effectiveness generic_effectiveness(double numerator, double denominator, double coefficient_a) {
    if (denominator == 0.0) throw FactorUndefined("acceleration factor undefined: zero denominator");
    const double tau = coefficient_a * numerator / denominator;
    if (!std::isfinite(tau)) throw FactorUndefined("acceleration factor is not finite");
    return {tau, tau > 1.0};
}

}  // namespace pka
