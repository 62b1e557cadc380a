#include "pka/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pka/errors.hpp"
#include "pka/summary.hpp"

namespace pka {
namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <typename F>
double time_once(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_gap(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
    return std::abs(a - b) / scale;
}

}  // namespace

void BenchConfig::validate() const {
    if (n1_values.empty() || n2_values.empty()) {
        throw std::invalid_argument("bench grid axes must be nonempty");
    }
    for (auto v : n1_values) {
        if (v < 2) throw std::invalid_argument("bench sizes must be >= 2");
    }
    for (auto v : n2_values) {
        if (v < 2) throw std::invalid_argument("bench sizes must be >= 2");
    }
    if (trials < 1) throw std::invalid_argument("bench trials must be >= 1");
}

std::size_t cell_bytes(std::int64_t n1, std::int64_t n2) {
    return 2 * static_cast<std::size_t>(n1 + n2) * sizeof(double);
}

BenchRecord run_cell(std::int64_t n1, std::int64_t n2, int trials, std::uint64_t seed,
                     const UnitCosts& costs, const CellOptions& options) {
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("bench cell sizes must be >= 2");
    if (trials < 1) throw std::invalid_argument("bench trials must be >= 1");
    if (cell_bytes(n1, n2) > options.memory_budget_bytes) {
        throw std::invalid_argument("cell needs " + std::to_string(cell_bytes(n1, n2)) +
                                    " bytes, over the memory budget of " +
                                    std::to_string(options.memory_budget_bytes));
    }

    SampleGenerator gen(seed, options.distribution);
    const std::vector<double> d1 = gen.take(n1);
    const std::vector<double> d2 = gen.take(n2);
    std::vector<double> all;
    all.reserve(d1.size() + d2.size());
    all.insert(all.end(), d1.begin(), d1.end());
    all.insert(all.end(), d2.begin(), d2.end());

    const MomentSummary prior = summarize(d1);

    MomentSummary direct;
    MomentSummary merged;
    const auto run_direct = [&] { direct = summarize(all); };
    const auto run_pka = [&] { merged = merge_population(prior, summarize(d2)); };

    time_once(run_direct);
    time_once(run_pka);
    std::vector<double> t_direct;
    std::vector<double> t_pka;
    for (int t = 0; t < trials; ++t) {
        t_direct.push_back(time_once(run_direct));
        t_pka.push_back(time_once(run_pka));
    }

    BenchRecord rec;
    rec.n1 = n1;
    rec.n2 = n2;
    rec.t_direct_measured = median(std::move(t_direct));
    rec.t_pka_measured = median(std::move(t_pka));
    const CostBreakdown model = predict_variance_times(n1, n2, costs);
    rec.t_direct_model = model.t_direct;
    rec.t_pka_model = model.t_pka;
    rec.value_direct = direct.population_variance();
    rec.value_pka = merged.population_variance();
    if (relative_gap(rec.value_direct, rec.value_pka) > kValueTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "variance paths disagree: direct " << rec.value_direct << " vs merged "
            << rec.value_pka;
        throw InvariantViolation(msg.str());
    }
    return rec;
}

std::vector<BenchRecord> run_grid(const BenchConfig& config, const UnitCosts& costs,
                                  std::ostream* progress) {
    config.validate();
    costs.validate();
    const CellOptions options{config.distribution, config.memory_budget_bytes};
    std::vector<BenchRecord> out;
    const std::size_t total = config.n1_values.size() * config.n2_values.size();
    for (const auto n1 : config.n1_values) {
        for (const auto n2 : config.n2_values) {
            const std::string cell =
                "cell (n1=" + std::to_string(n1) + ", n2=" + std::to_string(n2) + ")";
            try {
                out.push_back(run_cell(n1, n2, config.trials, config.seed, costs, options));
            } catch (const InvariantViolation& e) {
                throw InvariantViolation(cell + ": " + e.what());
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(cell + ": " + e.what());
            } catch (const std::exception& e) {
                throw std::runtime_error(cell + ": " + e.what());
            }
            if (progress != nullptr) {
                const BenchRecord& r = out.back();
                *progress << "[" << out.size() << "/" << total << "] " << cell
                          << " tau_measured=" << r.tau_measured()
                          << " tau_model=" << r.tau_model() << '\n';
            }
        }
    }
    return out;
}

double kendall_tau_gain_vs_n1(const std::vector<BenchRecord>& records) {
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (std::size_t j = i + 1; j < records.size(); ++j) {
            const BenchRecord& a = records[i];
            const BenchRecord& b = records[j];
            if (a.n2 != b.n2 || a.n1 == b.n1) continue;
            ++pairs;
            const double gain_a = a.t_direct_measured - a.t_pka_measured;
            const double gain_b = b.t_direct_measured - b.t_pka_measured;
            const double s = static_cast<double>(b.n1 - a.n1) * (gain_b - gain_a);
            if (s > 0.0) ++concordant;
            if (s < 0.0) ++discordant;
        }
    }
    if (pairs == 0) return 0.0;
    return static_cast<double>(concordant - discordant) / static_cast<double>(pairs);
}

double model_agreement(const std::vector<BenchRecord>& records) {
    if (records.empty()) return 0.0;
    std::size_t agree = 0;
    for (const auto& r : records) {
        if ((r.tau_measured() > 1.0) == (r.tau_model() > 1.0)) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(records.size());
}

}  // namespace pka
