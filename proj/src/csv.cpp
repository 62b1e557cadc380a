#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pka/bench.hpp"
#include "pka/errors.hpp"

namespace pka {
namespace {

constexpr const char* kHeader =
    "n1,n2,t_direct_measured,t_pka_measured,t_direct_model,t_pka_model,value_direct,value_pka,"
    "tau_measured,tau_model";

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void emit_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
    if (records.empty()) throw std::invalid_argument("no records to emit");
    out << kHeader << '\n';
    for (const auto& r : records) {
        out << r.n1 << ',' << r.n2 << ',' << fmt9(r.t_direct_measured) << ','
            << fmt9(r.t_pka_measured) << ',' << fmt9(r.t_direct_model) << ','
            << fmt9(r.t_pka_model) << ',' << fmt9(r.value_direct) << ',' << fmt9(r.value_pka)
            << ',' << fmt9(r.tau_measured()) << ',' << fmt9(r.tau_model()) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing CSV output");
}

void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    emit_csv(records, out);
}

std::vector<BenchRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
        throw ParseError(1, "missing or unexpected CSV header");
    }
    std::vector<BenchRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 10) throw ParseError(line_no, "expected 10 fields");
        try {
            BenchRecord r;
            r.n1 = std::stoll(fields[0]);
            r.n2 = std::stoll(fields[1]);
            r.t_direct_measured = std::stod(fields[2]);
            r.t_pka_measured = std::stod(fields[3]);
            r.t_direct_model = std::stod(fields[4]);
            r.t_pka_model = std::stod(fields[5]);
            r.value_direct = std::stod(fields[6]);
            r.value_pka = std::stod(fields[7]);
            out.push_back(r);
        } catch (const std::logic_error&) {
            throw ParseError(line_no, "unparseable number");
        }
    }
    return out;
}

}  // namespace pka
