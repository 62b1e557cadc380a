#include <gtest/gtest.h>

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "oracle.hpp"
#include "pka/errors.hpp"
#include "pka/net.hpp"
#include "pka/stream.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kFixture = fs::path(PKA_TEST_DATA_DIR) / "household_sample.txt";

// Regeneration parameters of the checked-in fixture.
constexpr std::int64_t kFixtureRecords = 1000;
constexpr std::uint64_t kFixtureSeed = 2006;
constexpr std::int64_t kFixtureMissingEvery = 97;

class TempDir {
public:
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "pka_test_XXXXXX").string();
        if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    [[nodiscard]] fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

fs::path write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

fs::path write_fixture(const fs::path& p, std::int64_t records, std::uint64_t seed,
                       std::int64_t missing_every) {
    std::ofstream out(p, std::ios::binary);
    pka::write_household_fixture(out, records, seed, pka::Distribution::uniform, missing_every);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> column_of(const fs::path& p, const pka::StreamConfig& cfg = {}) {
    const auto fd = pka::open_for_reading(p);
    pka::LineReader lines(fd.get());
    return pka::read_column(lines, cfg);
}

const pka::StreamConfig kDefault{};

TEST(RecordParser, ParsesActivePower) {
    const pka::RecordParser parser(pka::kHouseholdHeader, kDefault);
    EXPECT_EQ(parser.field_count(), 9u);
    EXPECT_EQ(parser.column_index(), 2u);
    const auto v =
        parser.parse("16/12/2006;17:24:00;4.216;0.418;234.840;18.400;0.000;1.000;17.000", 2);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(*v, 4.216);
}

TEST(RecordParser, MissingToken) {
    const pka::RecordParser parser(pka::kHouseholdHeader, kDefault);
    EXPECT_FALSE(parser.parse("21/12/2006;11:23:00;?;?;?;?;?;?;", 3).has_value());
}

TEST(RecordParser, WrongFieldCount) {
    const pka::RecordParser parser(pka::kHouseholdHeader, kDefault);
    try {
        (void)parser.parse("16/12/2006;17:24:00", 7);
        FAIL() << "expected ParseError";
    } catch (const pka::ParseError& e) {
        EXPECT_EQ(e.line(), 7u);
    }
}

TEST(RecordParser, RejectsBadNumbers) {
    const pka::RecordParser parser(pka::kHouseholdHeader, kDefault);
    for (const char* line : {"d;t;4.2x;0;0;0;0;0;0", "d;t;;0;0;0;0;0;0", "d;t;nan;0;0;0;0;0;0",
                             "d;t;inf;0;0;0;0;0;0"}) {
        EXPECT_THROW((void)parser.parse(line, 1), pka::ParseError) << line;
    }
}

TEST(RecordParser, OtherColumnAndDelimiter) {
    pka::StreamConfig cfg;
    cfg.column = "b";
    cfg.delimiter = ',';
    cfg.missing_token = "NA";
    const pka::RecordParser parser("a,b,c", cfg);
    EXPECT_EQ(parser.parse("1,2.5,3", 2), 2.5);
    EXPECT_FALSE(parser.parse("1,NA,3", 3).has_value());
    cfg.column = "zz";
    EXPECT_THROW(pka::RecordParser("a,b,c", cfg), std::invalid_argument);
}

TEST(StreamConfig, Validation) {
    pka::StreamConfig cfg;
    cfg.batch_size = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    EXPECT_EQ(pka::parse_mode("both"), pka::IngestMode::both);
    EXPECT_EQ(pka::parse_error_policy("skip"), pka::ErrorPolicy::skip);
    EXPECT_THROW(pka::parse_mode("fast"), std::invalid_argument);
}

TEST(Fixture, MatchesGenerator) {
    TempDir dir;
    const auto p = write_fixture(dir / "f.txt", kFixtureRecords, kFixtureSeed, kFixtureMissingEvery);
    EXPECT_EQ(slurp(p), slurp(kFixture));
}

TEST(Fixture, LayoutAndMissingRows) {
    const auto report = pka::ingest_file(kFixture, kDefault);
    EXPECT_EQ(report.records_read, kFixtureRecords);
    EXPECT_EQ(report.records_missing, kFixtureRecords / kFixtureMissingEvery);
    EXPECT_EQ(report.running_summary.count(), kFixtureRecords - kFixtureRecords / kFixtureMissingEvery);
    std::ifstream in(kFixture);
    std::string header;
    std::string first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, pka::kHouseholdHeader);
    EXPECT_EQ(first.rfind("16/12/2006;17:24:00;", 0), 0u) << first;
}

TEST(Ingest, ChunkedMergeMatchesOracle) {
    const auto values = column_of(kFixture);
    const auto o = oracle::two_pass(values);
    for (std::int64_t batch : {1, 7, 20, 200, 999, 5000}) {
        pka::StreamConfig cfg;
        cfg.batch_size = batch;
        const auto r = pka::ingest_file(kFixture, cfg);
        EXPECT_EQ(r.running_summary.count(), o.n);
        EXPECT_TRUE(oracle::close(r.running_summary.mean(), o.mean, 1e-12));
        EXPECT_TRUE(oracle::close(r.running_summary.population_variance(), o.m2 / o.n, 1e-9))
            << "batch=" << batch;
        const auto expected_batches = (o.n + batch - 1) / batch;
        EXPECT_EQ(r.batches, expected_batches);
    }
}

TEST(Ingest, BothModeTracksDeviation) {
    pka::StreamConfig cfg;
    cfg.batch_size = 50;
    cfg.mode = pka::IngestMode::both;
    const auto r = pka::ingest_file(kFixture, cfg);
    EXPECT_LT(r.max_rel_deviation, 1e-9);
    EXPECT_EQ(r.retained_values, r.running_summary.count());
    EXPECT_GT(r.t_direct_total, 0.0);
    EXPECT_GT(r.t_pka_total, 0.0);

    cfg.mode = pka::IngestMode::pka;
    EXPECT_EQ(pka::ingest_file(kFixture, cfg).retained_values, 0);
}

TEST(Ingest, DirectModeMatchesOracle) {
    pka::StreamConfig cfg;
    cfg.mode = pka::IngestMode::direct;
    const auto r = pka::ingest_file(kFixture, cfg);
    const auto o = oracle::two_pass(column_of(kFixture));
    EXPECT_TRUE(oracle::close(r.running_summary.population_variance(), o.m2 / o.n, 1e-12));
    EXPECT_EQ(r.t_pka_total, 0.0);
}

TEST(Ingest, StreamShorterThanOneBatch) {
    TempDir dir;
    const auto p = write_fixture(dir / "short.txt", 3, 1, 0);
    pka::StreamConfig cfg;
    cfg.batch_size = 200;
    const auto r = pka::ingest_file(p, cfg);
    EXPECT_EQ(r.batches, 1);
    const auto o = oracle::two_pass(column_of(p));
    EXPECT_EQ(r.running_summary.count(), 3);
    EXPECT_TRUE(oracle::close(r.running_summary.population_variance(), o.m2 / 3, 1e-12));
}

TEST(Ingest, AllMissing) {
    TempDir dir;
    const auto p = write_fixture(dir / "missing.txt", 10, 1, 1);
    const auto r = pka::ingest_file(p, kDefault);
    EXPECT_EQ(r.records_read, 10);
    EXPECT_EQ(r.records_missing, 10);
    EXPECT_TRUE(r.running_summary.empty());
    EXPECT_EQ(r.batches, 0);
    EXPECT_THROW((void)r.running_summary.population_variance(), pka::StatisticUndefined);
}

TEST(Ingest, MissingRecordsAreNeutral) {
    TempDir dir;
    const std::string header = std::string(pka::kHouseholdHeader) + "\n";
    const std::string a = "1/1/2007;00:00:00;1.5;0;0;0;0;0;0\n";
    const std::string b = "1/1/2007;00:01:00;2.5;0;0;0;0;0;0\n";
    const std::string m = "1/1/2007;00:02:00;?;?;?;?;?;?;\n";
    const auto with = pka::ingest_file(write_file(dir / "w.txt", header + a + m + m + b), kDefault);
    const auto without = pka::ingest_file(write_file(dir / "wo.txt", header + a + b), kDefault);
    EXPECT_EQ(with.running_summary, without.running_summary);
    EXPECT_EQ(with.records_missing, 2);
}

TEST(Ingest, ErrorPolicies) {
    TempDir dir;
    const std::string body = std::string(pka::kHouseholdHeader) +
                             "\n1/1/2007;00:00:00;1.5;0;0;0;0;0;0\n"
                             "broken;line\n"
                             "1/1/2007;00:01:00;2.5;0;0;0;0;0;0\n";
    const auto p = write_file(dir / "e.txt", body);
    try {
        (void)pka::ingest_file(p, kDefault);
        FAIL() << "expected ParseError";
    } catch (const pka::ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    pka::StreamConfig skip;
    skip.on_error = pka::ErrorPolicy::skip;
    const auto r = pka::ingest_file(p, skip);
    EXPECT_EQ(r.records_skipped, 1);
    EXPECT_EQ(r.running_summary.count(), 2);
    EXPECT_EQ(r.running_summary.mean(), 2.0);
}

TEST(Ingest, CrlfAndBlankLines) {
    TempDir dir;
    const std::string body = std::string(pka::kHouseholdHeader) +
                             "\r\n1/1/2007;00:00:00;1.0;0;0;0;0;0;0\r\n\r\n"
                             "1/1/2007;00:01:00;3.0;0;0;0;0;0;0";
    const auto r = pka::ingest_file(write_file(dir / "crlf.txt", body), kDefault);
    EXPECT_EQ(r.running_summary.count(), 2);
    EXPECT_EQ(r.running_summary.population_variance(), 1.0);
    EXPECT_FALSE(r.truncated);
}

TEST(Net, EndpointParsing) {
    const auto a = pka::Endpoint::parse("127.0.0.1:9000");
    EXPECT_EQ(a.host, "127.0.0.1");
    EXPECT_EQ(a.port, 9000);
    const auto b = pka::Endpoint::parse("[::1]:80");
    EXPECT_EQ(b.host, "::1");
    EXPECT_EQ(b.port, 80);
    EXPECT_THROW(pka::Endpoint::parse("localhost"), std::invalid_argument);
    EXPECT_THROW(pka::Endpoint::parse("localhost:99999"), std::invalid_argument);
}

TEST(Net, UnreachableConnectFails) {
    EXPECT_THROW(pka::connect_to(pka::Endpoint::parse("127.0.0.1:1")), pka::NetError);
}

struct Served {
    std::int64_t sent = 0;
    std::exception_ptr error;
};

// Feeds `source` through a loopback socket and ingests it on the other end.
pka::IngestReport ingest_over_loopback(const fs::path& source, const pka::StreamConfig& cfg,
                                       const pka::FeedOptions& feed, Served& served) {
    pka::Listener listener(pka::Endpoint::parse("127.0.0.1:0"));
    std::thread producer([&] {
        try {
            pka::UniqueFd conn = listener.accept_one();
            served.sent = pka::serve_feed(source, conn.get(), feed);
        } catch (...) {
            served.error = std::current_exception();
        }
    });
    pka::IngestReport report;
    try {
        const pka::UniqueFd fd = pka::connect_to({"127.0.0.1", listener.port()});
        report = pka::ingest_socket(fd.get(), cfg, pka::kHouseholdHeader);
    } catch (...) {
        producer.join();
        throw;
    }
    producer.join();
    if (served.error) std::rethrow_exception(served.error);
    return report;
}

TEST(Net, SocketIngestMatchesFileBitForBit) {
    pka::StreamConfig cfg;
    cfg.batch_size = 64;
    Served served;
    const auto over_socket = ingest_over_loopback(kFixture, cfg, {}, served);
    const auto from_file = pka::ingest_file(kFixture, cfg);
    EXPECT_EQ(served.sent, kFixtureRecords);
    EXPECT_EQ(over_socket.running_summary, from_file.running_summary);
    EXPECT_EQ(over_socket.records_read, from_file.records_read);
    EXPECT_EQ(over_socket.records_missing, from_file.records_missing);
    EXPECT_FALSE(over_socket.truncated);
}

TEST(Net, RateLimitedFeed) {
    TempDir dir;
    const auto p = write_fixture(dir / "rate.txt", 20, 3, 0);
    Served served;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = ingest_over_loopback(p, kDefault, {200.0}, served);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_EQ(r.running_summary.count(), 20);
    // The last of 20 records is due 19/200 s after the first.
    EXPECT_GE(seconds, 0.09);
    EXPECT_LT(seconds, 5.0);
}

TEST(Net, UnterminatedSocketRecordFlagsTruncation) {
    pka::Listener listener(pka::Endpoint::parse("127.0.0.1:0"));
    std::thread producer([&] {
        pka::UniqueFd conn = listener.accept_one();
        pka::send_all(conn.get(), "1/1/2007;00:00:00;1.0;0;0;0;0;0;0\n1/1/2007;00:01:00;2.");
    });
    const pka::UniqueFd fd = pka::connect_to({"127.0.0.1", listener.port()});
    const auto r = pka::ingest_socket(fd.get(), kDefault, pka::kHouseholdHeader);
    producer.join();
    EXPECT_TRUE(r.truncated);
    EXPECT_EQ(r.running_summary.count(), 1);
}

TEST(GridSearch, SkipsOversizedCellsWithWarning) {
    const auto values = column_of(kFixture);
    std::ostringstream warnings;
    const pka::UnitCosts costs{1e-9, 1e-9};
    const auto rows = pka::grid_search(values, {100, 5000}, {10, 50}, 3, costs, &warnings);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].n1, 100);
    EXPECT_EQ(rows[1].n2, 50);
    EXPECT_NE(warnings.str().find("prior=5000"), std::string::npos);
    for (const auto& r : rows) {
        std::vector<double> head(values.begin(), values.begin() + r.n1 + r.n2);
        const auto o = oracle::two_pass(head);
        EXPECT_TRUE(oracle::close(r.value_pka, o.m2 / o.n, 1e-9));
        EXPECT_TRUE(oracle::close(r.value_direct, o.m2 / o.n, 1e-12));
    }
}

TEST(GridSearch, SingleCellAndEmptyAxis) {
    const auto values = column_of(kFixture);
    const pka::UnitCosts costs{1e-9, 1e-9};
    EXPECT_EQ(pka::grid_search(values, {200}, {20}, 1, costs).size(), 1u);
    EXPECT_THROW(pka::grid_search(values, {}, {20}, 1, costs), std::invalid_argument);
}

int run_cli(const std::string& args, std::string& out) {
    const std::string cmd = std::string(PKA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return -1;
    char buf[4096];
    std::size_t n;
    out.clear();
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = ::pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ModelPrintsFactor) {
    std::string out;
    ASSERT_EQ(run_cli("model --n1 250000 --n2 250000 --ua 2.2238e-7 --um 2.3384e-7", out), 0);
    EXPECT_NE(out.find("tau=1.208"), std::string::npos) << out;
}

TEST(Cli, StreamFileMatchesLibrary) {
    std::string out;
    ASSERT_EQ(run_cli("stream --file " + kFixture.string() + " --batch 200", out), 0);
    const auto r = pka::ingest_file(kFixture, kDefault);
    EXPECT_NE(out.find("count=" + std::to_string(r.running_summary.count())), std::string::npos)
        << out;
}

TEST(Cli, GenReproducesFixture) {
    TempDir dir;
    const auto p = dir / "gen.txt";
    std::string out;
    ASSERT_EQ(run_cli("gen --records 1000 --seed 2006 --missing-every 97 --out " + p.string(), out),
              0);
    EXPECT_EQ(slurp(p), slurp(kFixture));
}

TEST(Cli, BadArgumentsFail) {
    std::string out;
    EXPECT_NE(run_cli("bench --n1 1", out), 0);
    EXPECT_NE(run_cli("nosuchcommand", out), 0);
    EXPECT_NE(run_cli("stream --file /nonexistent/file", out), 0);
}

}  // namespace
