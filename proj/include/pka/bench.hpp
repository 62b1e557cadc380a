#pragma once

// Timing harness: direct two-pass recomputation of the merged variance versus
// merging a known prior summary with the summary of the added data.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "pka/cost_model.hpp"
#include "pka/generator.hpp"

namespace pka {

struct BenchConfig {
    std::vector<std::int64_t> n1_values;
    std::vector<std::int64_t> n2_values;
    int trials = 30;
    std::uint64_t seed = 8086;
    Distribution distribution = Distribution::uniform;
    // Raw data held by one cell: d1, d2 and their concatenation.
    std::size_t memory_budget_bytes = std::size_t{1} << 30;

    // Throws std::invalid_argument on an empty axis, nonpositive size or
    // trials < 1.
    void validate() const;
};

struct BenchRecord {
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    double t_direct_measured = 0.0;  // median seconds
    double t_pka_measured = 0.0;
    double t_direct_model = 0.0;
    double t_pka_model = 0.0;
    double value_direct = 0.0;  // population variance of the concatenation
    double value_pka = 0.0;

    [[nodiscard]] double tau_measured() const { return t_direct_measured / t_pka_measured; }
    [[nodiscard]] double tau_model() const { return t_direct_model / t_pka_model; }
};

struct CellOptions {
    Distribution distribution = Distribution::uniform;
    std::size_t memory_budget_bytes = std::size_t{1} << 30;
};

// Relative agreement required between the two value paths.
inline constexpr double kValueTolerance = 1e-9;

std::size_t cell_bytes(std::int64_t n1, std::int64_t n2);

// Generates d1 and d2 from `seed`, then times (one discarded warm-up, then
// `trials` alternating repetitions):
//   direct: summarize(concat(d1, d2))
//   pka:    merge_population(summarize(d1) [precomputed], summarize(d2))
// Needs n1, n2 >= 2 and trials >= 1. Throws InvariantViolation when the two
// variance values disagree beyond kValueTolerance.
BenchRecord run_cell(std::int64_t n1, std::int64_t n2, int trials, std::uint64_t seed,
                     const UnitCosts& costs, const CellOptions& options = {});

// One record per cell, n1-major. Progress lines go to `progress` when set.
std::vector<BenchRecord> run_grid(const BenchConfig& config, const UnitCosts& costs,
                                  std::ostream* progress = nullptr);

void emit_csv(const std::vector<BenchRecord>& records, std::ostream& out);
void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path);
std::vector<BenchRecord> parse_csv(std::istream& in);

// Kendall tau-a between n1 and (t_direct - t_pka) measured, pooled over
// pairs of records sharing the same n2.
double kendall_tau_gain_vs_n1(const std::vector<BenchRecord>& records);

// Fraction of records whose measured and modelled tau fall on the same side
// of 1.
double model_agreement(const std::vector<BenchRecord>& records);

}  // namespace pka
