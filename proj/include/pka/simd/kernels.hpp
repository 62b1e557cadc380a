#pragma once

// Reduction kernels behind the two-pass summaries.
//
// Every kernel exists as a scalar reference and as vector variants
// (AVX2 on x86-64, NEON on AArch64). The active backend is picked once at
// startup from the CPU's capabilities and can be overridden with the
// PKA_KERNEL environment variable (scalar | avx2 | neon) or set_backend().
// Vector variants reassociate the sums, so results agree with the scalar
// reference to within summation error, not bit-for-bit. A given backend is
// deterministic.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pka::simd {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

struct KernelTable {
    // Σ x
    double (*sum)(const double* x, std::size_t n);
    // Σ (x - mean)^2
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);
    // Interleaved pairs [x0, y0, x1, y1, ...]; writes Σx and Σy.
    void (*sum_pairs)(const double* xy, std::size_t n_pairs, double* sx, double* sy);
    // Σ (x - mean_x)(y - mean_y) over interleaved pairs.
    double (*sum_cross_dev)(const double* xy, std::size_t n_pairs, double mean_x, double mean_y);
};

bool available(Backend b);
std::vector<Backend> available_backends();

// Throws std::invalid_argument when `b` is not available on this CPU.
const KernelTable& table(Backend b);

Backend active_backend();
void set_backend(Backend b);
const KernelTable& active_table();

double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double mean);

}  // namespace pka::simd
