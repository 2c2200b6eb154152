#include "eof/simd.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

namespace eof::simd {

namespace {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
};

constexpr KernelTable kScalar{scalar::dot, scalar::axpy, scalar::squared_distance};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{avx2::dot, avx2::axpy, avx2::squared_distance};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{neon::dot, neon::axpy, neon::squared_distance};
#endif

Level detect() noexcept {
    if (const char* env = std::getenv("EOF_SIMD"); env && std::strcmp(env, "scalar") == 0) {
        return Level::Scalar;
    }
    if (supported(Level::Avx2)) return Level::Avx2;
    if (supported(Level::Neon)) return Level::Neon;
    return Level::Scalar;
}

const KernelTable& table_for(Level level) noexcept {
    switch (level) {
#if defined(__x86_64__) || defined(_M_X64)
        case Level::Avx2: return kAvx2;
#endif
#if defined(__aarch64__)
        case Level::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Level> g_level{Level::Scalar};

const KernelTable& current() noexcept {
    const KernelTable* t = g_table.load(std::memory_order_acquire);
    if (t == nullptr) {
        const Level level = detect();
        g_level.store(level, std::memory_order_relaxed);
        t = &table_for(level);
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

std::string_view level_name(Level level) noexcept {
    switch (level) {
        case Level::Avx2: return "avx2";
        case Level::Neon: return "neon";
        case Level::Scalar: break;
    }
    return "scalar";
}

bool supported(Level level) noexcept {
    switch (level) {
        case Level::Scalar: return true;
        case Level::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Level::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Level active_level() noexcept {
    (void)current();
    return g_level.load(std::memory_order_relaxed);
}

void set_override(std::optional<Level> level) {
    const Level chosen = level ? (supported(*level) ? *level : Level::Scalar) : detect();
    g_level.store(chosen, std::memory_order_relaxed);
    g_table.store(&table_for(chosen), std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return current().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    current().axpy(alpha, x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return current().squared_distance(a.data(), b.data(), a.size());
}

}  // namespace eof::simd
