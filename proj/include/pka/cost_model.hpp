#pragma once

// Operation-count cost model for merge-based variance and covariance updates.
//
// Every procedure is charged `adds` scalar additions/subtractions and `muls`
// scalar multiplications/divisions, each at a constant machine cost. The
// model compares recomputing a statistic from raw data against updating it
// from a known prior summary.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pka {

struct UnitCosts {
    double u_add = 0.0;  // seconds per addition
    double u_mul = 0.0;  // seconds per multiplication

    // Throws std::invalid_argument unless both are finite and > 0.
    void validate() const;
};

struct OpCount {
    std::int64_t adds = 0;
    std::int64_t muls = 0;

    [[nodiscard]] double time(const UnitCosts& c) const noexcept {
        return static_cast<double>(adds) * c.u_add + static_cast<double>(muls) * c.u_mul;
    }

    friend constexpr bool operator==(const OpCount&, const OpCount&) = default;
};

struct CostBreakdown {
    double t_direct = 0.0;
    double t_pka = 0.0;
    std::optional<double> t_ross;
    double tau = 0.0;  // t_direct / t_pka
};

// Population/sample variance op counts, N = n1 + n2.
struct VarianceOpTable {
    OpCount direct;            // (2N-1, N)
    OpCount first;             // (2n1-1, n1)
    OpCount second;            // (2n2-1, n2)
    OpCount mean_direct;       // (N-1, 1)
    OpCount mean_pka;          // (1, 3)
    OpCount mean_first;        // (n1-1, 1)
    OpCount mean_second;       // (n2-1, 1)
    OpCount remainder;         // (5, 6)
    OpCount remainder_sample;  // (7, 6)
    OpCount remainder_total;   // (N+2n2+3, n2+11)
    OpCount pka_population;    // (N+2n2+3, n2+12)
    OpCount pka_sample;        // (N+2n2+5, n2+12)

    [[nodiscard]] std::vector<std::pair<std::string, OpCount>> rows() const;
};

struct CovarianceOpTable {
    OpCount baseline;            // (5N-3, N+3)
    OpCount second_stats;        // (5n2-3, n2+3)
    OpCount global_mean_update;  // (2, 6)
    OpCount covariance_update;   // (7, 8)
    OpCount pka_total;           // (5n2+6, n2+17)

    [[nodiscard]] std::vector<std::pair<std::string, OpCount>> rows() const;
};

// All size-taking functions throw std::invalid_argument on sizes < 1.
VarianceOpTable variance_op_counts(std::int64_t n1, std::int64_t n2);
CovarianceOpTable covariance_op_counts(std::int64_t n1, std::int64_t n2);

// t_direct = u_a(2N-1) + u_m N
// t_pka    = u_a(N+2n2+3) + u_m(n2+13)
// The multiplication constant is one higher than the pka_population table
// row; the closed form is the one used for predictions.
CostBreakdown predict_variance_times(std::int64_t n1, std::int64_t n2, const UnitCosts& costs);

// Sample-variance variant: t_pka = u_a(N+2n2+5) + u_m(n2+13), plus the
// single-observation recurrence time when n1 >= 2.
CostBreakdown predict_sample_variance_times(std::int64_t n1, std::int64_t n2,
                                            const UnitCosts& costs);

struct RossTime {
    double prior_mean = 0.0;     // (n1-1)u_a + u_m
    double mean_step = 0.0;      // 2u_a + u_m
    double variance_step = 0.0;  // 4u_a + 3u_m
    // (N+5n2-1)u_a + (4n2-1)u_m. The components above add up to 2u_m more;
    // the closed form is the one compared against the merge.
    double total = 0.0;
};

// Needs n1 >= 2 and n2 >= 1.
RossTime predict_ross_time(std::int64_t n1, std::int64_t n2, const UnitCosts& costs);

// Baseline and merge-path covariance times from the covariance table rows.
CostBreakdown predict_covariance_times(std::int64_t n1, std::int64_t n2, const UnitCosts& costs);

struct CovarianceEffectiveness {
    // (5n1+3)u_a + (14-n1)u_m; positive means the merge is predicted cheaper.
    double margin = 0.0;
    bool effective = false;
    // True when 5u_a >= u_m: the margin is positive for every n1 >= 1.
    bool holds_for_all_n1 = false;
    // When 5u_a < u_m: the margin is positive exactly for n1 < threshold,
    // threshold = (3u_a + 14u_m)/(u_m - 5u_a).
    std::optional<double> threshold;
    // time(baseline) - time(pka_total) = (5n1-9)u_a + (n1-14)u_m; positive for
    // every n1 >= 15 whatever the costs.
    double table_margin = 0.0;

    static constexpr std::int64_t kTableSufficientN1 = 15;
};

CovarianceEffectiveness covariance_effectiveness(std::int64_t n1, const UnitCosts& costs);

// Smallest n1 >= 1 with predicted tau > 1 for the population-variance model,
// or nullopt when none exists up to 1e12.
std::optional<std::int64_t> crossover_n1(std::int64_t n2, const UnitCosts& costs);

inline constexpr std::int64_t kCrossoverSearchLimit = 1'000'000'000'000;

// Times dependent chains of scalar additions and multiplications, `batch`
// operations per trial, subtracts the measured loop overhead, and returns the
// per-operation median over `trials`. Needs trials >= 3 and batch >= 10000.
// Throws CalibrationError when a corrected time is not positive.
UnitCosts calibrate_unit_costs(int trials, std::int64_t batch);

}  // namespace pka
