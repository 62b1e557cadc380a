#include "pka/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace pka {
namespace {

void require_sizes(std::int64_t n1, std::int64_t n2) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("dataset sizes must be >= 1");
}

double d(std::int64_t v) { return static_cast<double>(v); }

}  // namespace

void UnitCosts::validate() const {
    if (!(std::isfinite(u_add) && u_add > 0.0 && std::isfinite(u_mul) && u_mul > 0.0)) {
        throw std::invalid_argument("unit costs must be finite and positive");
    }
}

std::vector<std::pair<std::string, OpCount>> VarianceOpTable::rows() const {
    return {
        {"variance_direct", direct},
        {"variance_first", first},
        {"variance_second", second},
        {"mean_direct", mean_direct},
        {"mean_pka", mean_pka},
        {"mean_first", mean_first},
        {"mean_second", mean_second},
        {"remainder", remainder},
        {"remainder_sample", remainder_sample},
        {"remainder_total", remainder_total},
        {"population_variance_pka", pka_population},
        {"sample_variance_pka", pka_sample},
    };
}

std::vector<std::pair<std::string, OpCount>> CovarianceOpTable::rows() const {
    return {
        {"covariance_baseline", baseline},
        {"second_stats", second_stats},
        {"global_mean_update", global_mean_update},
        {"covariance_update", covariance_update},
        {"covariance_pka_total", pka_total},
    };
}

VarianceOpTable variance_op_counts(std::int64_t n1, std::int64_t n2) {
    require_sizes(n1, n2);
    const std::int64_t n = n1 + n2;
    VarianceOpTable t;
    t.direct = {2 * n - 1, n};
    t.first = {2 * n1 - 1, n1};
    t.second = {2 * n2 - 1, n2};
    t.mean_direct = {n - 1, 1};
    t.mean_pka = {1, 3};
    t.mean_first = {n1 - 1, 1};
    t.mean_second = {n2 - 1, 1};
    t.remainder = {5, 6};
    t.remainder_sample = {7, 6};
    t.remainder_total = {n + 2 * n2 + 3, n2 + 11};
    t.pka_population = {n + 2 * n2 + 3, n2 + 12};
    t.pka_sample = {n + 2 * n2 + 5, n2 + 12};
    return t;
}

CovarianceOpTable covariance_op_counts(std::int64_t n1, std::int64_t n2) {
    require_sizes(n1, n2);
    const std::int64_t n = n1 + n2;
    return {
        {5 * n - 3, n + 3},
        {5 * n2 - 3, n2 + 3},
        {2, 6},
        {7, 8},
        {5 * n2 + 6, n2 + 17},
    };
}

CostBreakdown predict_variance_times(std::int64_t n1, std::int64_t n2, const UnitCosts& costs) {
    require_sizes(n1, n2);
    costs.validate();
    const std::int64_t n = n1 + n2;
    CostBreakdown out;
    out.t_direct = costs.u_add * d(2 * n - 1) + costs.u_mul * d(n);
    out.t_pka = costs.u_add * d(n + 2 * n2 + 3) + costs.u_mul * d(n2 + 13);
    out.tau = out.t_direct / out.t_pka;
    return out;
}

CostBreakdown predict_sample_variance_times(std::int64_t n1, std::int64_t n2,
                                            const UnitCosts& costs) {
    CostBreakdown out = predict_variance_times(n1, n2, costs);
    out.t_pka += 2.0 * costs.u_add;
    out.tau = out.t_direct / out.t_pka;
    if (n1 >= 2) out.t_ross = predict_ross_time(n1, n2, costs).total;
    return out;
}

RossTime predict_ross_time(std::int64_t n1, std::int64_t n2, const UnitCosts& costs) {
    if (n1 < 2) throw std::invalid_argument("recurrence needs n1 >= 2");
    if (n2 < 1) throw std::invalid_argument("recurrence needs n2 >= 1");
    costs.validate();
    const std::int64_t n = n1 + n2;
    RossTime r;
    r.prior_mean = d(n1 - 1) * costs.u_add + costs.u_mul;
    r.mean_step = 2.0 * costs.u_add + costs.u_mul;
    r.variance_step = 4.0 * costs.u_add + 3.0 * costs.u_mul;
    r.total = d(n + 5 * n2 - 1) * costs.u_add + d(4 * n2 - 1) * costs.u_mul;
    return r;
}

CostBreakdown predict_covariance_times(std::int64_t n1, std::int64_t n2, const UnitCosts& costs) {
    costs.validate();
    const CovarianceOpTable t = covariance_op_counts(n1, n2);
    CostBreakdown out;
    out.t_direct = t.baseline.time(costs);
    out.t_pka = t.pka_total.time(costs);
    out.tau = out.t_direct / out.t_pka;
    return out;
}

CovarianceEffectiveness covariance_effectiveness(std::int64_t n1, const UnitCosts& costs) {
    if (n1 < 1) throw std::invalid_argument("n1 must be >= 1");
    costs.validate();
    const double ua = costs.u_add;
    const double um = costs.u_mul;
    CovarianceEffectiveness out;
    out.margin = d(5 * n1 + 3) * ua + d(14 - n1) * um;
    out.effective = out.margin > 0.0;
    out.holds_for_all_n1 = 5.0 * ua >= um;
    if (!out.holds_for_all_n1) out.threshold = (3.0 * ua + 14.0 * um) / (um - 5.0 * ua);
    out.table_margin = d(5 * n1 - 9) * ua + d(n1 - 14) * um;
    return out;
}

std::optional<std::int64_t> crossover_n1(std::int64_t n2, const UnitCosts& costs) {
    if (n2 < 1) throw std::invalid_argument("n2 must be >= 1");
    costs.validate();
    const auto beneficial = [&](std::int64_t n1) {
        const CostBreakdown b = predict_variance_times(n1, n2, costs);
        return b.t_direct > b.t_pka;
    };
    // t_direct - t_pka grows with n1, so the beneficial set is a suffix.
    if (!beneficial(kCrossoverSearchLimit)) return std::nullopt;
    std::int64_t lo = 1;
    std::int64_t hi = kCrossoverSearchLimit;
    if (beneficial(lo)) return lo;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (beneficial(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace pka
