#include <charconv>
#include <cmath>
#include <stdexcept>

#include "pka/errors.hpp"
#include "pka/stream.hpp"

namespace pka {
namespace {

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

template <typename F>
std::size_t for_each_field(std::string_view line, char delim, F&& f) {
    std::size_t index = 0;
    for (;;) {
        const auto pos = line.find(delim);
        f(index, line.substr(0, pos));
        ++index;
        if (pos == std::string_view::npos) return index;
        line.remove_prefix(pos + 1);
    }
}

}  // namespace

IngestMode parse_mode(std::string_view name) {
    if (name == "pka") return IngestMode::pka;
    if (name == "direct") return IngestMode::direct;
    if (name == "both") return IngestMode::both;
    throw std::invalid_argument("unknown mode: " + std::string(name));
}

ErrorPolicy parse_error_policy(std::string_view name) {
    if (name == "abort") return ErrorPolicy::abort;
    if (name == "skip") return ErrorPolicy::skip;
    throw std::invalid_argument("unknown error policy: " + std::string(name));
}

void StreamConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (column.empty()) throw std::invalid_argument("column name must be nonempty");
    if (delimiter == '\n' || delimiter == '\r') throw std::invalid_argument("bad delimiter");
}

RecordParser::RecordParser(std::string_view header, const StreamConfig& config)
    : delimiter_(config.delimiter), missing_(config.missing_token) {
    bool found = false;
    fields_ = for_each_field(header, delimiter_, [&](std::size_t i, std::string_view name) {
        if (!found && trim(name) == config.column) {
            column_ = i;
            found = true;
        }
    });
    if (!found) throw std::invalid_argument("column '" + config.column + "' not in header");
}

std::optional<double> RecordParser::parse(std::string_view line, std::size_t line_no) const {
    std::string_view field;
    const std::size_t n = for_each_field(line, delimiter_, [&](std::size_t i, std::string_view f) {
        if (i == column_) field = f;
    });
    if (n != fields_) {
        throw ParseError(line_no, "expected " + std::to_string(fields_) + " fields, found " +
                                      std::to_string(n));
    }
    field = trim(field);
    if (field == missing_) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() ||
        !std::isfinite(value)) {
        throw ParseError(line_no, "cannot parse '" + std::string(field) + "' as a number");
    }
    return value;
}

}  // namespace pka
