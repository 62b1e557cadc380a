// pka: merge-based variance tooling.
//
//   pka calibrate --trials 10 --batch 1000000
//   pka bench --n1 1000,10000 --n2 1000,10000 --trials 30 --seed 8086 --out grid.csv
//   pka model --n1 250000 --n2 250000 --ua 2.2238e-7 --um 2.3384e-7
//   pka gen --records 10000 --out stream.txt
//   pka stream --file stream.txt --batch 200 --mode both
//   pka stream --listen 127.0.0.1:9000 --batch 200
//   pka feed --file stream.txt --connect 127.0.0.1:9000 --rate 100

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pka/bench.hpp"
#include "pka/cost_model.hpp"
#include "pka/errors.hpp"
#include "pka/net.hpp"
#include "pka/simd/kernels.hpp"
#include "pka/stream.hpp"

namespace {

// Largest cell size allowed without --full-scale.
constexpr std::int64_t kDeskScaleLimit = 100'000;

std::string sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct CostArgs {
    std::optional<double> ua;
    std::optional<double> um;
    int trials = 5;
    std::int64_t batch = 1'000'000;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--ua", ua, "Seconds per addition (skips calibration)");
        cmd->add_option("--um", um, "Seconds per multiplication (skips calibration)");
        cmd->add_option("--calibrate-trials", trials, "Calibration trials")->capture_default_str();
        cmd->add_option("--calibrate-batch", batch, "Calibration batch")->capture_default_str();
    }

    pka::UnitCosts resolve() const {
        if (ua.has_value() != um.has_value()) {
            throw std::invalid_argument("--ua and --um must be given together");
        }
        if (ua) {
            pka::UnitCosts c{*ua, *um};
            c.validate();
            return c;
        }
        const pka::UnitCosts c = pka::calibrate_unit_costs(trials, batch);
        std::cerr << "calibrated u_add=" << sig(c.u_add, 6) << " u_mul=" << sig(c.u_mul, 6)
                  << '\n';
        return c;
    }
};

void write_records(const std::vector<pka::BenchRecord>& records, const std::string& out) {
    if (out.empty() || out == "-") {
        pka::emit_csv(records, std::cout);
    } else {
        pka::emit_csv(records, std::filesystem::path(out));
    }
}

void print_report(const pka::IngestReport& r, const pka::StreamConfig& cfg) {
    std::cout << "records_read=" << r.records_read << '\n'
              << "records_missing=" << r.records_missing << '\n'
              << "records_skipped=" << r.records_skipped << '\n'
              << "batches=" << r.batches << '\n'
              << "count=" << r.running_summary.count() << '\n'
              << "mean=" << sig(r.running_summary.mean(), 17) << '\n'
              << "m2=" << sig(r.running_summary.m2(), 17) << '\n';
    if (r.running_summary.count() >= 1) {
        std::cout << "population_variance=" << sig(r.running_summary.population_variance(), 17)
                  << '\n';
    }
    if (r.running_summary.count() >= 2) {
        std::cout << "sample_variance=" << sig(r.running_summary.sample_variance(), 17) << '\n';
    }
    if (cfg.mode != pka::IngestMode::direct) {
        std::cout << "t_pka_total=" << sig(r.t_pka_total, 6) << '\n';
    }
    if (cfg.mode != pka::IngestMode::pka) {
        std::cout << "t_direct_total=" << sig(r.t_direct_total, 6) << '\n'
                  << "retained_values=" << r.retained_values << '\n';
    }
    if (cfg.mode == pka::IngestMode::both) {
        std::cout << "max_rel_deviation=" << sig(r.max_rel_deviation, 6) << '\n';
    }
    std::cout << "truncated=" << (r.truncated ? "true" : "false") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Merge-based variance updates: cost model, benchmarks and stream ingestion"};
    app.require_subcommand(1);
    std::string kernel;
    app.add_option("--kernel", kernel, "Reduction backend: scalar | avx2 | neon");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Measure per-operation unit costs");
    int cal_trials = 10;
    std::int64_t cal_batch = 1'000'000;
    calibrate->add_option("--trials", cal_trials, "Trials (>= 3)")->capture_default_str();
    calibrate->add_option("--batch", cal_batch, "Operations per trial (>= 10000)")
        ->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Time direct vs merge over an n1 x n2 grid");
    pka::BenchConfig bcfg;
    bcfg.n1_values = {1000, 3000, 10000, 30000, 100000};
    bcfg.n2_values = bcfg.n1_values;
    std::string bench_out;
    std::string bench_dist = "uniform";
    bool full_scale = false;
    CostArgs bench_costs;
    bench->add_option("--n1", bcfg.n1_values, "Original dataset sizes")->delimiter(',');
    bench->add_option("--n2", bcfg.n2_values, "Added dataset sizes")->delimiter(',');
    bench->add_option("--trials", bcfg.trials, "Timed repetitions per cell")->capture_default_str();
    bench->add_option("--seed", bcfg.seed, "Data generator seed")->capture_default_str();
    bench->add_option("--distribution", bench_dist, "uniform | normal")->capture_default_str();
    bench->add_option("--memory-budget", bcfg.memory_budget_bytes, "Max bytes of data per cell")
        ->capture_default_str();
    bench->add_option("--out", bench_out, "CSV destination (default stdout)");
    bench->add_flag("--full-scale", full_scale, "Allow sizes above 100000");
    bench_costs.add_to(bench);

    // model
    auto* model = app.add_subcommand("model", "Print op-count tables and predicted times");
    std::int64_t model_n1 = 250000;
    std::int64_t model_n2 = 250000;
    double model_ua = 2.2238e-7;
    double model_um = 2.3384e-7;
    model->add_option("--n1", model_n1)->capture_default_str();
    model->add_option("--n2", model_n2)->capture_default_str();
    model->add_option("--ua", model_ua)->capture_default_str();
    model->add_option("--um", model_um)->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "Write a synthetic household-layout stream file");
    std::int64_t gen_records = 10000;
    std::uint64_t gen_seed = 8086;
    std::string gen_dist = "uniform";
    std::int64_t gen_missing_every = 0;
    std::string gen_out;
    gen->add_option("--records", gen_records)->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--distribution", gen_dist)->capture_default_str();
    gen->add_option("--missing-every", gen_missing_every, "Every k-th record missing (0 = none)")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "Destination (default stdout)");

    // stream
    auto* stream = app.add_subcommand("stream", "Ingest a record stream from a file or socket");
    pka::StreamConfig scfg;
    std::string s_file;
    std::string s_listen;
    std::string s_connect;
    std::string s_header;
    std::string s_delim = ";";
    std::string s_mode = "pka";
    std::string s_on_error = "abort";
    std::vector<std::int64_t> grid_n1;
    std::vector<std::int64_t> grid_n2;
    int grid_trials = 30;
    bool grid_default = false;
    std::string s_out;
    CostArgs stream_costs;
    auto* src_file = stream->add_option("--file", s_file, "Input file with header line");
    auto* src_listen = stream->add_option("--listen", s_listen, "Accept one feed on host:port");
    auto* src_connect = stream->add_option("--connect", s_connect, "Read a feed from host:port");
    src_file->excludes(src_listen)->excludes(src_connect);
    src_listen->excludes(src_connect);
    stream->add_option("--header", s_header,
                       "Column names for socket input (default: household layout)");
    stream->add_option("--column", scfg.column)->capture_default_str();
    stream->add_option("--delimiter", s_delim)->capture_default_str();
    stream->add_option("--missing", scfg.missing_token)->capture_default_str();
    stream->add_option("--batch", scfg.batch_size, "Records per merge chunk")->capture_default_str();
    stream->add_option("--mode", s_mode, "pka | direct | both")->capture_default_str();
    stream->add_option("--on-error", s_on_error, "abort | skip")->capture_default_str();
    stream->add_option("--grid-n1", grid_n1, "Prior sizes for grid search")->delimiter(',');
    stream->add_option("--grid-n2", grid_n2, "Batch sizes for grid search")->delimiter(',');
    stream->add_option("--grid-trials", grid_trials)->capture_default_str();
    stream->add_flag("--grid", grid_default,
                     "Grid search with sizes 20,200,2000,20000,200000 on any unset axis");
    stream->add_option("--out", s_out, "CSV destination for grid search");
    stream_costs.add_to(stream);

    // feed
    auto* feed = app.add_subcommand("feed", "Replay a file's records over a TCP stream");
    std::string f_file;
    std::string f_connect;
    std::string f_listen;
    std::optional<double> f_rate;
    feed->add_option("--file", f_file)->required();
    auto* f_conn_opt = feed->add_option("--connect", f_connect, "Consumer address host:port");
    auto* f_listen_opt = feed->add_option("--listen", f_listen, "Wait for a consumer on host:port");
    f_conn_opt->excludes(f_listen_opt);
    feed->add_option("--rate", f_rate, "Records per second (default unlimited)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!kernel.empty()) pka::simd::set_backend(pka::simd::parse_backend(kernel));

        if (*calibrate) {
            const pka::UnitCosts c = pka::calibrate_unit_costs(cal_trials, cal_batch);
            std::cout << "u_add=" << sig(c.u_add, 6) << "\nu_mul=" << sig(c.u_mul, 6) << '\n';
            return 0;
        }

        if (*bench) {
            bcfg.distribution = pka::parse_distribution(bench_dist);
            bcfg.validate();
            if (!full_scale) {
                for (const auto& axis : {bcfg.n1_values, bcfg.n2_values}) {
                    for (auto v : axis) {
                        if (v > kDeskScaleLimit) {
                            throw std::invalid_argument("size " + std::to_string(v) +
                                                        " needs --full-scale");
                        }
                    }
                }
            }
            const pka::UnitCosts costs = bench_costs.resolve();
            std::cerr << "kernel=" << pka::simd::to_string(pka::simd::active_backend()) << '\n';
            const auto records = pka::run_grid(bcfg, costs, &std::cerr);
            write_records(records, bench_out);
            std::cerr << "kendall_tau_gain_vs_n1=" << pka::kendall_tau_gain_vs_n1(records)
                      << " model_agreement=" << pka::model_agreement(records) << '\n';
            return 0;
        }

        if (*model) {
            const pka::UnitCosts costs{model_ua, model_um};
            const auto var = pka::variance_op_counts(model_n1, model_n2);
            const auto cov = pka::covariance_op_counts(model_n1, model_n2);
            std::cout << "row,adds,muls\n";
            for (const auto& [name, ops] : var.rows()) {
                std::cout << name << ',' << ops.adds << ',' << ops.muls << '\n';
            }
            for (const auto& [name, ops] : cov.rows()) {
                std::cout << name << ',' << ops.adds << ',' << ops.muls << '\n';
            }
            const auto pop = pka::predict_variance_times(model_n1, model_n2, costs);
            std::cout << "t_direct=" << sig(pop.t_direct, 9) << "\nt_pka=" << sig(pop.t_pka, 9)
                      << "\ntau=" << sig(pop.tau, 6) << '\n';
            if (model_n1 >= 2) {
                const auto samp = pka::predict_sample_variance_times(model_n1, model_n2, costs);
                std::cout << "t_pka_sample=" << sig(samp.t_pka, 9)
                          << "\nt_ross=" << sig(*samp.t_ross, 9) << '\n';
            }
            const auto ctimes = pka::predict_covariance_times(model_n1, model_n2, costs);
            std::cout << "tau_covariance=" << sig(ctimes.tau, 6) << '\n';
            if (const auto x = pka::crossover_n1(model_n2, costs)) {
                std::cout << "crossover_n1=" << *x << '\n';
            } else {
                std::cout << "crossover_n1=none\n";
            }
            return 0;
        }

        if (*gen) {
            const auto dist = pka::parse_distribution(gen_dist);
            if (gen_out.empty() || gen_out == "-") {
                pka::write_household_fixture(std::cout, gen_records, gen_seed, dist,
                                             gen_missing_every);
            } else {
                std::ofstream out(gen_out);
                if (!out) throw std::runtime_error("cannot open " + gen_out);
                pka::write_household_fixture(out, gen_records, gen_seed, dist, gen_missing_every);
            }
            return 0;
        }

        if (*stream) {
            if (s_delim.size() != 1) throw std::invalid_argument("--delimiter must be one char");
            scfg.delimiter = s_delim[0];
            scfg.mode = pka::parse_mode(s_mode);
            scfg.on_error = pka::parse_error_policy(s_on_error);
            scfg.validate();
            const std::string header = s_header.empty() ? std::string(pka::kHouseholdHeader)
                                                        : s_header;

            pka::UniqueFd source;
            bool socket_input = false;
            if (!s_file.empty()) {
                source = pka::open_for_reading(s_file);
            } else if (!s_listen.empty()) {
                pka::Listener listener(pka::Endpoint::parse(s_listen));
                std::cerr << "listening on port " << listener.port() << '\n';
                source = listener.accept_one();
                socket_input = true;
            } else if (!s_connect.empty()) {
                source = pka::connect_to(pka::Endpoint::parse(s_connect));
                socket_input = true;
            } else {
                throw std::invalid_argument("one of --file, --listen, --connect is required");
            }
            pka::LineReader lines(source.get(), socket_input);
            const std::optional<std::string_view> given_header =
                socket_input ? std::optional<std::string_view>(header) : std::nullopt;

            if (grid_default) {
                const std::vector<std::int64_t> sizes{20, 200, 2000, 20000, 200000};
                if (grid_n1.empty()) grid_n1 = sizes;
                if (grid_n2.empty()) grid_n2 = sizes;
            }
            if (!grid_n1.empty() || !grid_n2.empty()) {
                if (grid_n1.empty() || grid_n2.empty()) {
                    throw std::invalid_argument("--grid-n1 and --grid-n2 go together");
                }
                const auto values = pka::read_column(lines, scfg, given_header);
                const pka::UnitCosts costs = stream_costs.resolve();
                const auto records =
                    pka::grid_search(values, grid_n1, grid_n2, grid_trials, costs, &std::cerr);
                if (records.empty()) throw std::runtime_error("every grid cell was skipped");
                write_records(records, s_out);
                return 0;
            }
            const pka::IngestReport report = pka::ingest(lines, scfg, given_header);
            print_report(report, scfg);
            return report.truncated ? 3 : 0;
        }

        if (*feed) {
            pka::FeedOptions options;
            options.rate = f_rate;
            pka::UniqueFd conn;
            if (!f_connect.empty()) {
                conn = pka::connect_to(pka::Endpoint::parse(f_connect));
            } else if (!f_listen.empty()) {
                pka::Listener listener(pka::Endpoint::parse(f_listen));
                std::cerr << "listening on port " << listener.port() << '\n';
                conn = listener.accept_one();
            } else {
                throw std::invalid_argument("one of --connect, --listen is required");
            }
            const auto sent = pka::serve_feed(f_file, conn.get(), options);
            std::cerr << "sent " << sent << " records\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
