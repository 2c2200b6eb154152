#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// eof::simd::scalar and vectorized variants selected once at runtime.
// Results agree with the scalar reference up to floating-point
// reassociation; tests/test_simd.cpp pins the tolerance.

#include <optional>
#include <span>
#include <string_view>

namespace eof::simd {

enum class Level { Scalar, Avx2, Neon };

[[nodiscard]] std::string_view level_name(Level level) noexcept;

// The variant picked for this process. Honors EOF_SIMD=scalar.
[[nodiscard]] Level active_level() noexcept;

// Whether the running CPU can execute the given variant.
[[nodiscard]] bool supported(Level level) noexcept;

// Forces a variant (tests only). std::nullopt restores auto-detection.
void set_override(std::optional<Level> level);

// sum_i a[i] * b[i]
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

// y[i] += alpha * x[i]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// sum_i (a[i] - b[i])^2
[[nodiscard]] double squared_distance(std::span<const double> a, std::span<const double> b);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace neon
#endif

}  // namespace eof::simd
