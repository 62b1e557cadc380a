#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pka {

enum class Distribution { uniform, normal };

Distribution parse_distribution(std::string_view name);
std::string_view to_string(Distribution d);

// Deterministic sample source: the same seed and call sequence produce the
// same values bit-for-bit. Uniform draws lie in [0, 1); normal draws are
// standard normal.
class SampleGenerator {
public:
    SampleGenerator(std::uint64_t seed, Distribution dist) : engine_(seed), dist_(dist) {}

    double next();
    std::vector<double> take(std::int64_t n);

private:
    std::mt19937_64 engine_;
    Distribution dist_;
};

}  // namespace pka
