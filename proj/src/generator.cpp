#include "pka/generator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pka {

Distribution parse_distribution(std::string_view name) {
    if (name == "uniform") return Distribution::uniform;
    if (name == "normal") return Distribution::normal;
    throw std::invalid_argument("unknown distribution: " + std::string(name));
}

std::string_view to_string(Distribution d) {
    return d == Distribution::uniform ? "uniform" : "normal";
}

double SampleGenerator::next() {
    // Explicit transforms rather than <random> distributions, whose output
    // sequences are implementation-defined.
    const auto unit = [this] {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    };
    if (dist_ == Distribution::uniform) return unit();
    double u1 = unit();
    while (u1 == 0.0) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> SampleGenerator::take(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("sample count must be nonnegative");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) out.push_back(next());
    return out;
}

}  // namespace pka
