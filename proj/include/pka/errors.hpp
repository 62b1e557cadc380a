#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pka {

// A statistic was requested from a summary too small to define it
// (variance of an empty summary, sample variance of one point, ...).
class StatisticUndefined : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A summary's second moment is negative beyond rounding noise.
class CorruptSummary : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class FactorUndefined : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A harness cross-check between two computation paths failed.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pka
