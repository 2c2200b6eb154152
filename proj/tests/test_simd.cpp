#include "eof/simd.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace eof;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
};

std::vector<std::pair<simd::Level, Table>> vector_tables() {
    std::vector<std::pair<simd::Level, Table>> out;
#if defined(__x86_64__) || defined(_M_X64)
    if (simd::supported(simd::Level::Avx2)) {
        out.push_back({simd::Level::Avx2, {simd::avx2::dot, simd::avx2::axpy, simd::avx2::squared_distance}});
    }
#endif
#if defined(__aarch64__)
    if (simd::supported(simd::Level::Neon)) {
        out.push_back({simd::Level::Neon, {simd::neon::dot, simd::neon::axpy, simd::neon::squared_distance}});
    }
#endif
    return out;
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
    std::mt19937_64 rng(1);
    for (std::size_t n = 0; n < 68; ++n) {
        const auto a = random_vector(n, rng);
        const auto b = random_vector(n, rng);
        double d = 0.0, s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d += a[i] * b[i];
            s += (a[i] - b[i]) * (a[i] - b[i]);
        }
        CHECK(simd::scalar::dot(a.data(), b.data(), n) == doctest::Approx(d).epsilon(1e-14));
        CHECK(simd::scalar::squared_distance(a.data(), b.data(), n) == doctest::Approx(s).epsilon(1e-14));
        auto y = b;
        simd::scalar::axpy(0.7, a.data(), y.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == 0.7 * a[i] + b[i]);
    }
}

TEST_CASE("vector kernels agree with the scalar reference") {
    std::mt19937_64 rng(2);
    for (const auto& [level, t] : vector_tables()) {
        CAPTURE(simd::level_name(level));
        for (std::size_t n = 0; n < 68; ++n) {
            CAPTURE(n);
            const auto a = random_vector(n, rng);
            const auto b = random_vector(n, rng);
            double mag = 0.0;
            for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]) + (a[i] - b[i]) * (a[i] - b[i]);
            const double tol = 1e-15 * (mag + 1.0) * 4.0;
            CHECK(std::abs(t.dot(a.data(), b.data(), n) - simd::scalar::dot(a.data(), b.data(), n)) <= tol);
            CHECK(std::abs(t.squared_distance(a.data(), b.data(), n) -
                           simd::scalar::squared_distance(a.data(), b.data(), n)) <= tol);
            auto y1 = b;
            auto y2 = b;
            t.axpy(-1.3, a.data(), y1.data(), n);
            simd::scalar::axpy(-1.3, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (std::abs(y2[i]) + 1.0));
        }
    }
}

TEST_CASE("override switches the dispatched variant") {
    std::mt19937_64 rng(3);
    const auto a = random_vector(37, rng);
    const auto b = random_vector(37, rng);
    simd::set_override(simd::Level::Scalar);
    CHECK(simd::active_level() == simd::Level::Scalar);
    const double ref = simd::dot(a, b);
    CHECK(ref == simd::scalar::dot(a.data(), b.data(), a.size()));
    simd::set_override(std::nullopt);
    CHECK(simd::dot(a, b) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(simd::supported(simd::Level::Scalar));
}
