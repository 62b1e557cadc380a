#include <algorithm>
#include <array>
#include <chrono>
#include <stdexcept>
#include <vector>

#include "pka/cost_model.hpp"
#include "pka/errors.hpp"

namespace pka {
namespace {

using Clock = std::chrono::steady_clock;

// Pins a value in a register so the loop body cannot be folded or hoisted.
inline void opaque(double& v) {
#if defined(__x86_64__)
    asm volatile("" : "+x"(v));
#elif defined(__aarch64__)
    asm volatile("" : "+w"(v));
#else
    asm volatile("" : "+m"(v) : : "memory");
#endif
}

// Dependent operations per loop iteration; amortizes the loop bookkeeping.
constexpr int kChain = 8;

struct Operands {
    std::array<double, kChain> addends{};
    std::array<double, kChain> factors{};
};

Operands make_operands() {
    Operands ops;
    // Factors come in reciprocal pairs so long products stay near 1.
    volatile double base = 1.0000001;
    for (int i = 0; i < kChain; ++i) {
        ops.addends[i] = 1e-3 * static_cast<double>(i + 1);
        ops.factors[i] = (i % 2 == 0) ? base : 1.0 / base;
    }
    return ops;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double time_overhead(std::int64_t iterations, double& sink) {
    double acc = 0.0;
    const auto t0 = Clock::now();
    for (std::int64_t i = 0; i < iterations; ++i) opaque(acc);
    const double t = seconds_since(t0);
    sink += acc;
    return t;
}

double time_adds(const Operands& ops, std::int64_t iterations, double& sink) {
    auto [a0, a1, a2, a3, a4, a5, a6, a7] = ops.addends;
    for (double* a : {&a0, &a1, &a2, &a3, &a4, &a5, &a6, &a7}) opaque(*a);
    double acc = 0.0;
    const auto t0 = Clock::now();
    for (std::int64_t i = 0; i < iterations; ++i) {
        acc = acc + a0;
        acc = acc + a1;
        acc = acc + a2;
        acc = acc + a3;
        acc = acc + a4;
        acc = acc + a5;
        acc = acc + a6;
        acc = acc + a7;
        opaque(acc);
    }
    const double t = seconds_since(t0);
    sink += acc;
    return t;
}

double time_muls(const Operands& ops, std::int64_t iterations, double& sink) {
    auto [f0, f1, f2, f3, f4, f5, f6, f7] = ops.factors;
    for (double* f : {&f0, &f1, &f2, &f3, &f4, &f5, &f6, &f7}) opaque(*f);
    double acc = 1.0;
    const auto t0 = Clock::now();
    for (std::int64_t i = 0; i < iterations; ++i) {
        acc = acc * f0;
        acc = acc * f1;
        acc = acc * f2;
        acc = acc * f3;
        acc = acc * f4;
        acc = acc * f5;
        acc = acc * f6;
        acc = acc * f7;
        opaque(acc);
    }
    const double t = seconds_since(t0);
    sink += acc;
    return t;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

UnitCosts calibrate_unit_costs(int trials, std::int64_t batch) {
    if (trials < 3) throw std::invalid_argument("calibration needs at least 3 trials");
    if (batch < 10'000) throw std::invalid_argument("calibration batch must be >= 10000");

    const Operands ops = make_operands();
    const std::int64_t iterations = (batch + kChain - 1) / kChain;
    double sink = 0.0;
    // Warm-up pass brings the clock and caches to steady state.
    time_overhead(iterations, sink);
    time_adds(ops, iterations, sink);
    time_muls(ops, iterations, sink);

    std::vector<double> adds;
    std::vector<double> muls;
    const double per = 1.0 / static_cast<double>(iterations * kChain);
    for (int t = 0; t < trials; ++t) {
        const double overhead = time_overhead(iterations, sink);
        adds.push_back((time_adds(ops, iterations, sink) - overhead) * per);
        muls.push_back((time_muls(ops, iterations, sink) - overhead) * per);
    }
    volatile double keep = sink;
    (void)keep;

    const UnitCosts costs{median(std::move(adds)), median(std::move(muls))};
    if (!(costs.u_add > 0.0) || !(costs.u_mul > 0.0)) {
        throw CalibrationError("overhead-corrected operation time is not positive");
    }
    return costs;
}

}  // namespace pka
