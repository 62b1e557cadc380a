#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace pka::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* lookup(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &detail::scalar_table();
        case Backend::avx2:
            return cpu_has_avx2() ? detail::avx2_table() : nullptr;
        case Backend::neon:
            return detail::neon_table();
    }
    return nullptr;
}

Backend pick_default() {
    if (const char* env = std::getenv("PKA_KERNEL"); env != nullptr && *env != '\0') {
        const Backend b = parse_backend(env);
        if (!available(b)) {
            throw std::invalid_argument(std::string("PKA_KERNEL backend not available: ") + env);
        }
        return b;
    }
    if (available(Backend::avx2)) return Backend::avx2;
    if (available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{&table(pick_default())};
    return slot;
}

std::atomic<Backend>& active_tag() {
    static std::atomic<Backend> tag{pick_default()};
    return tag;
}

}  // namespace

std::string_view to_string(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

Backend parse_backend(std::string_view name) {
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    if (name == "neon") return Backend::neon;
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

bool available(Backend b) { return lookup(b) != nullptr; }

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
        if (available(b)) out.push_back(b);
    }
    return out;
}

const KernelTable& table(Backend b) {
    const KernelTable* t = lookup(b);
    if (t == nullptr) {
        throw std::invalid_argument("kernel backend not available: " + std::string(to_string(b)));
    }
    return *t;
}

Backend active_backend() { return active_tag().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    const KernelTable& t = table(b);
    active_slot().store(&t, std::memory_order_relaxed);
    active_tag().store(b, std::memory_order_relaxed);
}

const KernelTable& active_table() { return *active_slot().load(std::memory_order_relaxed); }

double sum(std::span<const double> x) {
    return active_slot().load(std::memory_order_relaxed)->sum(x.data(), x.size());
}

double sum_sq_dev(std::span<const double> x, double mean) {
    return active_slot().load(std::memory_order_relaxed)->sum_sq_dev(x.data(), x.size(), mean);
}

}  // namespace pka::simd
