#pragma once

// Record-stream ingestion: a running variance summary per column, updated by
// merging one chunk summary per batch, optionally shadowed by a full direct
// recomputation for comparison.
//
// Input layout: a header line of delimiter-separated column names, then one
// record per line. A field equal to the missing token is skipped. Records
// arriving over a socket carry no header; the consumer is handed one.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pka/bench.hpp"
#include "pka/cost_model.hpp"
#include "pka/line_reader.hpp"
#include "pka/summary.hpp"

namespace pka {

// Column layout of the household power consumption files.
inline constexpr std::string_view kHouseholdHeader =
    "Date;Time;Global_active_power;Global_reactive_power;Voltage;Global_intensity;"
    "Sub_metering_1;Sub_metering_2;Sub_metering_3";

enum class IngestMode { pka, direct, both };
enum class ErrorPolicy { abort, skip };

IngestMode parse_mode(std::string_view name);
ErrorPolicy parse_error_policy(std::string_view name);

struct StreamConfig {
    std::string column = "Global_active_power";
    char delimiter = ';';
    std::string missing_token = "?";
    std::int64_t batch_size = 200;
    IngestMode mode = IngestMode::pka;
    ErrorPolicy on_error = ErrorPolicy::abort;

    void validate() const;
};

class RecordParser {
public:
    // Throws std::invalid_argument when the configured column is absent.
    RecordParser(std::string_view header, const StreamConfig& config);

    // nullopt for the missing token; throws ParseError (with `line_no`) on a
    // wrong field count or an unparseable number.
    [[nodiscard]] std::optional<double> parse(std::string_view line, std::size_t line_no) const;

    [[nodiscard]] std::size_t field_count() const noexcept { return fields_; }
    [[nodiscard]] std::size_t column_index() const noexcept { return column_; }

private:
    char delimiter_;
    std::string missing_;
    std::size_t fields_ = 0;
    std::size_t column_ = 0;
};

struct IngestReport {
    std::int64_t records_read = 0;  // valid + missing
    std::int64_t records_missing = 0;
    std::int64_t records_skipped = 0;  // malformed lines dropped under ErrorPolicy::skip
    std::int64_t batches = 0;
    MomentSummary running_summary;
    double t_pka_total = 0.0;     // seconds in chunk summaries and merges
    double t_direct_total = 0.0;  // seconds in full recomputations
    // Largest relative gap between merged and recomputed population variance
    // over batch boundaries (mode both).
    double max_rel_deviation = 0.0;
    std::int64_t retained_values = 0;  // raw values held for the direct path
    bool truncated = false;
};

// Consumes `lines` in order. With `header` unset, the first line is the
// header. Parsing happens outside the timed sections.
IngestReport ingest(LineReader& lines, const StreamConfig& config,
                    std::optional<std::string_view> header = std::nullopt);

IngestReport ingest_file(const std::filesystem::path& path, const StreamConfig& config);

// Reads records from a connected stream socket until the peer closes.
IngestReport ingest_socket(int fd, const StreamConfig& config, std::string_view header);

// All valid values of the configured column, in order.
std::vector<double> read_column(LineReader& lines, const StreamConfig& config,
                                std::optional<std::string_view> header = std::nullopt);

struct FeedOptions {
    std::optional<double> rate;  // records per second; unset = unlimited
};

// Replays the data lines of `source` (header dropped) to `fd`, one
// newline-terminated record per line. Returns the number of records sent.
std::int64_t serve_feed(const std::filesystem::path& source, int fd, const FeedOptions& options);

// For each (prior, batch) pair: a prior summary of the first `prior` values,
// then timing of summarize(batch) + merge against a direct two-pass over the
// first prior + batch values. Pairs needing more values than available are
// skipped with a warning. Rows use the bench record schema (n1 = prior,
// n2 = batch).
std::vector<BenchRecord> grid_search(const std::vector<double>& values,
                                     const std::vector<std::int64_t>& prior_sizes,
                                     const std::vector<std::int64_t>& batch_sizes, int trials,
                                     const UnitCosts& costs, std::ostream* warnings = nullptr);

// Writes a header and `records` lines in household layout, one minute apart.
// Global_active_power is derived from SampleGenerator(seed, dist) draws and
// printed at three decimals; every `missing_every`-th record (0 = never) is
// all missing tokens.
void write_household_fixture(std::ostream& out, std::int64_t records, std::uint64_t seed,
                             Distribution dist, std::int64_t missing_every);

}  // namespace pka
