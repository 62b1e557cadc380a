#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pka/errors.hpp"
#include "pka/generator.hpp"
#include "pka/stream.hpp"

namespace pka {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Reads the header (unless given) and hands every data line to `on_line`.
template <typename F>
void scan(LineReader& lines, const StreamConfig& config, std::optional<std::string_view> header,
          F&& on_line) {
    std::string line;
    std::string header_line;
    std::size_t line_no = 0;
    if (header) {
        header_line = std::string(*header);
    } else {
        if (!lines.next(header_line)) throw ParseError(1, "missing header line");
        line_no = 1;
    }
    const RecordParser parser(header_line, config);
    while (lines.next(line)) {
        ++line_no;
        if (line.empty()) continue;
        on_line(parser, line, line_no);
    }
}

class Aggregator {
public:
    explicit Aggregator(const StreamConfig& config) : config_(config) {
        chunk_.reserve(static_cast<std::size_t>(config.batch_size));
    }

    void add(double v) {
        chunk_.push_back(v);
        if (static_cast<std::int64_t>(chunk_.size()) == config_.batch_size) flush();
    }

    void flush() {
        if (chunk_.empty()) return;
        const bool pka = config_.mode != IngestMode::direct;
        const bool direct = config_.mode != IngestMode::pka;
        if (pka) {
            const auto t0 = Clock::now();
            running_ = merge_population(running_, summarize(chunk_));
            report_.t_pka_total += elapsed(t0);
        }
        if (direct) {
            retained_.insert(retained_.end(), chunk_.begin(), chunk_.end());
            const auto t0 = Clock::now();
            recomputed_ = summarize(retained_);
            report_.t_direct_total += elapsed(t0);
        }
        if (pka && direct) {
            report_.max_rel_deviation =
                std::max(report_.max_rel_deviation,
                         relative_gap(running_.population_variance(),
                                      recomputed_.population_variance()));
        }
        ++report_.batches;
        chunk_.clear();
    }

    IngestReport& report() { return report_; }

    IngestReport finish() {
        flush();
        report_.running_summary = config_.mode == IngestMode::direct ? recomputed_ : running_;
        report_.retained_values = static_cast<std::int64_t>(retained_.size());
        return report_;
    }

private:
    const StreamConfig& config_;
    IngestReport report_;
    std::vector<double> chunk_;
    std::vector<double> retained_;
    MomentSummary running_;
    MomentSummary recomputed_;
};

}  // namespace

IngestReport ingest(LineReader& lines, const StreamConfig& config,
                    std::optional<std::string_view> header) {
    config.validate();
    Aggregator agg(config);
    scan(lines, config, header,
         [&](const RecordParser& parser, std::string_view line, std::size_t line_no) {
             std::optional<double> v;
             try {
                 v = parser.parse(line, line_no);
             } catch (const ParseError&) {
                 if (config.on_error == ErrorPolicy::abort) throw;
                 ++agg.report().records_skipped;
                 return;
             }
             ++agg.report().records_read;
             if (v) {
                 agg.add(*v);
             } else {
                 ++agg.report().records_missing;
             }
         });
    IngestReport report = agg.finish();
    report.truncated = lines.truncated();
    return report;
}

IngestReport ingest_file(const std::filesystem::path& path, const StreamConfig& config) {
    const UniqueFd fd = open_for_reading(path);
    LineReader lines(fd.get());
    return ingest(lines, config);
}

IngestReport ingest_socket(int fd, const StreamConfig& config, std::string_view header) {
    LineReader lines(fd, true);
    return ingest(lines, config, header);
}

std::vector<double> read_column(LineReader& lines, const StreamConfig& config,
                                std::optional<std::string_view> header) {
    config.validate();
    std::vector<double> out;
    scan(lines, config, header,
         [&](const RecordParser& parser, std::string_view line, std::size_t line_no) {
             try {
                 if (auto v = parser.parse(line, line_no)) out.push_back(*v);
             } catch (const ParseError&) {
                 if (config.on_error == ErrorPolicy::abort) throw;
             }
         });
    return out;
}

std::vector<BenchRecord> grid_search(const std::vector<double>& values,
                                     const std::vector<std::int64_t>& prior_sizes,
                                     const std::vector<std::int64_t>& batch_sizes, int trials,
                                     const UnitCosts& costs, std::ostream* warnings) {
    if (prior_sizes.empty() || batch_sizes.empty()) {
        throw std::invalid_argument("grid axes must be nonempty");
    }
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    costs.validate();
    const std::span<const double> all(values);
    std::vector<BenchRecord> out;
    for (const auto prior : prior_sizes) {
        for (const auto batch : batch_sizes) {
            if (prior < 1 || batch < 1) throw std::invalid_argument("grid sizes must be >= 1");
            if (static_cast<std::size_t>(prior + batch) > values.size()) {
                if (warnings != nullptr) {
                    *warnings << "warning: skipping cell (prior=" << prior << ", batch=" << batch
                              << "): source has only " << values.size() << " values\n";
                }
                continue;
            }
            const auto head = all.first(static_cast<std::size_t>(prior + batch));
            const auto chunk = head.subspan(static_cast<std::size_t>(prior));
            const MomentSummary known = summarize(head.first(static_cast<std::size_t>(prior)));

            MomentSummary direct;
            MomentSummary merged;
            std::vector<double> t_direct;
            std::vector<double> t_pka;
            for (int t = -1; t < trials; ++t) {
                auto t0 = Clock::now();
                direct = summarize(head);
                const double td = elapsed(t0);
                t0 = Clock::now();
                merged = merge_population(known, summarize(chunk));
                const double tp = elapsed(t0);
                if (t >= 0) {
                    t_direct.push_back(td);
                    t_pka.push_back(tp);
                }
            }
            BenchRecord r;
            r.n1 = prior;
            r.n2 = batch;
            r.t_direct_measured = median(std::move(t_direct));
            r.t_pka_measured = median(std::move(t_pka));
            const CostBreakdown model = predict_variance_times(prior, batch, costs);
            r.t_direct_model = model.t_direct;
            r.t_pka_model = model.t_pka;
            r.value_direct = direct.population_variance();
            r.value_pka = merged.population_variance();
            if (relative_gap(r.value_direct, r.value_pka) > kValueTolerance) {
                throw InvariantViolation("grid cell (prior=" + std::to_string(prior) + ", batch=" +
                                         std::to_string(batch) + "): variance paths disagree");
            }
            out.push_back(r);
        }
    }
    return out;
}

void write_household_fixture(std::ostream& out, std::int64_t records, std::uint64_t seed,
                             Distribution dist, std::int64_t missing_every) {
    using namespace std::chrono;
    SampleGenerator gen(seed, dist);
    out << kHouseholdHeader << '\n';
    const sys_days start_day = year{2006} / December / 16;
    const minutes start = hours{17} + minutes{24};
    char buf[160];
    for (std::int64_t i = 0; i < records; ++i) {
        const auto stamp = start_day + start + minutes{i};
        const auto day = floor<days>(stamp);
        const year_month_day ymd{day};
        const hh_mm_ss hms{stamp - day};
        std::snprintf(buf, sizeof buf, "%u/%u/%d;%02d:%02d:00", static_cast<unsigned>(ymd.day()),
                      static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()),
                      static_cast<int>(hms.hours().count()),
                      static_cast<int>(hms.minutes().count()));
        out << buf;
        const double draw = gen.next();
        // Household active power in kW: a floor of 0.076 and a mean near 1.1.
        const double active = dist == Distribution::uniform ? 0.076 + 2.0 * draw
                                                            : std::max(0.076, 1.09 + 1.06 * draw);
        if (missing_every > 0 && (i + 1) % missing_every == 0) {
            out << ";?;?;?;?;?;?;\n";
            continue;
        }
        const double reactive = 0.1 + 0.05 * std::abs(active);
        const double voltage = 240.0 - 2.0 * active;
        const double intensity = 4.2 * std::abs(active);
        std::snprintf(buf, sizeof buf, ";%.3f;%.3f;%.3f;%.3f;0.000;%.3f;%.3f\n", active, reactive,
                      voltage, intensity, static_cast<double>(i % 3),
                      static_cast<double>(i % 18));
        out << buf;
    }
}

}  // namespace pka
