#include "eof/error.hpp"
#include "eof/features.hpp"
#include "eof/kernels.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace eof;

namespace {

std::vector<KernelSpec> all_specs(int dim) {
    return {KernelSpec::laplace(1.0, dim), KernelSpec::laplace(7.5, dim), KernelSpec::weighted_sobolev(2.0, dim),
            KernelSpec::brownian_bridge(dim)};
}

}  // namespace

TEST_CASE("phi_1d node and endpoint values") {
    for (const auto& spec : all_specs(1)) {
        for (int l = 1; l <= 6; ++l) {
            for (std::int64_t i = 1; i < (std::int64_t{1} << l); i += 2) {
                const double h = std::ldexp(1.0, -l);
                CHECK(phi_1d(spec, l, i, static_cast<double>(i) * h) == doctest::Approx(1.0).epsilon(1e-14));
                CHECK(phi_1d(spec, l, i, static_cast<double>(i - 1) * h) == 0.0);
                CHECK(phi_1d(spec, l, i, static_cast<double>(i + 1) * h) == 0.0);
            }
        }
    }
}

TEST_CASE("phi_1d reference values") {
    const auto bb = KernelSpec::brownian_bridge(1);
    CHECK(phi_1d(bb, 2, 1, 0.375) == doctest::Approx(0.5).epsilon(1e-15));

    const auto lap = KernelSpec::laplace(1.0, 1);
    const double expected = std::sinh(0.25) / std::sinh(0.5);
    CHECK(phi_1d(lap, 1, 1, 0.25) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(phi_1d(lap, 1, 1, 0.75) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("closed forms agree with the generic quotient") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& spec : all_specs(1)) {
        for (int t = 0; t < 400; ++t) {
            const int l = 1 + static_cast<int>(rng() % 8);
            const auto i = static_cast<std::int64_t>(2 * (rng() % (std::uint64_t{1} << (l - 1))) + 1);
            const double x = u(rng);
            CHECK(phi_1d(spec, l, i, x) == doctest::Approx(phi_1d_generic(spec, l, i, x)).epsilon(1e-9));
        }
    }
    std::uniform_real_distribution<double> w(0.1, 20.0);
    for (int t = 0; t < 200; ++t) {
        const double omega = w(rng);
        const int l = 1 + static_cast<int>(rng() % 10);
        const auto i = static_cast<std::int64_t>(2 * (rng() % (std::uint64_t{1} << (l - 1))) + 1);
        const double x = u(rng);
        CHECK(phi_1d(KernelSpec::laplace(omega, 1), l, i, x) ==
              doctest::Approx(oracle::laplace_phi(omega, l, i, x)).epsilon(1e-12));
    }
}

TEST_CASE("large bandwidths stay finite") {
    const auto spec = KernelSpec::laplace(5000.0, 1);
    const double v = phi_1d(spec, 1, 1, 0.499);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(std::exp(-5000.0 * 0.001)).epsilon(1e-10));
    CHECK(phi_1d(spec, 1, 1, 0.1) >= 0.0);
    CHECK(phi_1d(spec, 1, 1, 0.1) < 1e-300);
}

TEST_CASE("phi_1d rejects invalid indices") {
    const auto spec = KernelSpec::brownian_bridge(1);
    CHECK_THROWS_AS((void)phi_1d(spec, 2, 2, 0.5), InvalidIndex);
    CHECK_THROWS_AS((void)phi_1d(spec, 2, 5, 0.5), InvalidIndex);
    CHECK_THROWS_AS((void)phi_1d(spec, 2, -1, 0.5), InvalidIndex);
    CHECK_THROWS_AS((void)phi_1d(spec, 0, 1, 0.5), InvalidLevel);
}

TEST_CASE("phi_nd tensor products") {
    const auto bb = KernelSpec::brownian_bridge(2);
    const FeatureIndex a{{1, 2}, {1, 1}};
    const std::vector<double> xa{0.5, 0.25};
    CHECK(phi_nd(bb, a, xa) == 1.0);

    const FeatureIndex b{{1, 2}, {1, 3}};
    const std::vector<double> xb{0.25, 0.625};
    CHECK(phi_nd(bb, b, xb) == doctest::Approx(oracle::hat(1, 1, 0.25) * oracle::hat(2, 3, 0.625)).epsilon(1e-15));
    CHECK(phi_nd(bb, b, xb) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS((void)phi_nd(bb, b, std::vector<double>{0.5}), DimError);
    CHECK_THROWS_AS((void)phi_nd(bb, FeatureIndex{{1}, {1}}, xb), DimError);
}

TEST_CASE("support boxes") {
    CHECK(support_box(FeatureIndex{{1}, {1}}) == Box{{0.0, 1.0}});
    CHECK(support_box(FeatureIndex{{3}, {5}}) == Box{{0.5, 0.75}});
    CHECK(support_box(FeatureIndex{{2, 2}, {1, 3}}) == Box{{0.0, 0.5}, {0.5, 1.0}});
}

TEST_CASE("compact support and nesting") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& spec : all_specs(2)) {
        for (int t = 0; t < 300; ++t) {
            FeatureIndex idx{{1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5)}, {0, 0}};
            for (int d = 0; d < 2; ++d) {
                idx.pos[d] = static_cast<std::int64_t>(2 * (rng() % (std::uint64_t{1} << (idx.level[d] - 1))) + 1);
            }
            const auto box = support_box(idx);
            const std::vector<double> x{u(rng), u(rng)};
            const bool inside = box[0].lo < x[0] && x[0] < box[0].hi && box[1].lo < x[1] && x[1] < box[1].hi;
            if (!inside) CHECK(phi_nd(spec, idx, x) == 0.0);
            if (inside) CHECK(phi_nd(spec, idx, x) > 0.0);
        }
    }
    for (int l = 1; l <= 6; ++l) {
        for (std::int64_t i = 1; i < (std::int64_t{1} << l); i += 2) {
            const auto parent = support_box(FeatureIndex{{l}, {i}});
            const auto left = support_box(FeatureIndex{{l + 1}, {2 * i - 1}});
            const auto right = support_box(FeatureIndex{{l + 1}, {2 * i + 1}});
            CHECK(left[0].lo == parent[0].lo);
            CHECK(left[0].hi == right[0].lo);
            CHECK(right[0].hi == parent[0].hi);
        }
    }
}

TEST_CASE("supports within a level have disjoint interiors") {
    for (int l = 1; l <= 8; ++l) {
        std::vector<Interval> boxes;
        for (std::int64_t i = 1; i < (std::int64_t{1} << l); i += 2) boxes.push_back(support_box(FeatureIndex{{l}, {i}})[0]);
        for (std::size_t a = 0; a + 1 < boxes.size(); ++a) CHECK(boxes[a].hi <= boxes[a + 1].lo);
    }
}

TEST_CASE("Brownian bridge features are orthogonal under the derivative inner product") {
    for (int l = 1; l <= 5; ++l) {
        for (std::int64_t i = 1; i < (std::int64_t{1} << l); i += 2) {
            for (int n = 1; n <= 5; ++n) {
                for (std::int64_t j = 1; j < (std::int64_t{1} << n); j += 2) {
                    const double g = oracle::hat_slope_product(l, i, n, j);
                    const double want = (l == n && i == j) ? std::ldexp(1.0, l + 1) : 0.0;
                    CHECK(std::abs(g - want) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("hierarchical surplus on Brownian bridge") {
    const auto bb = KernelSpec::brownian_bridge(1);
    for (int l = 1; l <= 5; ++l) {
        for (std::int64_t i = 1; i < (std::int64_t{1} << l); i += 2) {
            const FeatureIndex idx{{l}, {i}};
            CHECK(hierarchical_surplus(bb, [](std::span<const double>) { return 3.5; }, idx) ==
                  doctest::Approx(0.0).epsilon(1e-9));
            CHECK(std::abs(hierarchical_surplus(bb, [](std::span<const double> x) { return 2.0 - 0.7 * x[0]; }, idx)) <
                  1e-9);
            const double self = hierarchical_surplus(
                bb, [&](std::span<const double> x) { return phi_nd(bb, idx, x); }, idx);
            CHECK(self == doctest::Approx(oracle::hat_slope_product(l, i, l, i)).epsilon(1e-12));
            CHECK(self == doctest::Approx(std::ldexp(1.0, l + 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hierarchical surplus gives a diagonal Laplace Gram") {
    const auto lap = KernelSpec::laplace(3.0, 1);
    std::vector<FeatureIndex> all;
    for (int l = 1; l <= 4; ++l) {
        for (std::int64_t i = 1; i < (std::int64_t{1} << l); i += 2) all.push_back(FeatureIndex{{l}, {i}});
    }
    for (const auto& a : all) {
        for (const auto& b : all) {
            const double g = hierarchical_surplus(
                lap, [&](std::span<const double> x) { return phi_nd(lap, a, x); }, b);
            if (a == b) {
                CHECK(g == doctest::Approx(1.0 / lap.level_constant(a.level[0])).epsilon(1e-10));
            } else {
                CHECK(std::abs(g) < 1e-8);
            }
        }
    }
}

TEST_CASE("surplus of a kernel section recovers the feature value") {
    // <k(., y), phi>_k = phi(y) by the reproducing property.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& spec : all_specs(2)) {
        for (int t = 0; t < 50; ++t) {
            const std::vector<double> y{u(rng), u(rng)};
            FeatureIndex idx{{1 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 4)}, {0, 0}};
            for (int d = 0; d < 2; ++d) {
                idx.pos[d] = static_cast<std::int64_t>(2 * (rng() % (std::uint64_t{1} << (idx.level[d] - 1))) + 1);
            }
            const double s = hierarchical_surplus(
                spec, [&](std::span<const double> x) { return kernel_eval(spec, x, y); }, idx);
            CHECK(s == doctest::Approx(phi_nd(spec, idx, y)).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("feature index validation") {
    CHECK_NOTHROW(validate(FeatureIndex{{3, 1}, {7, 1}}));
    CHECK_THROWS_AS(validate(FeatureIndex{{3, 1}, {8, 1}}), InvalidIndex);
    CHECK_THROWS_AS(validate(FeatureIndex{{3, 1}, {9, 1}}), InvalidIndex);
    CHECK_THROWS_AS(validate(FeatureIndex{{0, 1}, {1, 1}}), InvalidLevel);
    CHECK_THROWS_AS(validate(FeatureIndex{{1, 1}, {1}}), DimError);
    CHECK(canonical_less(FeatureIndex{{2, 1}, {1, 1}}, FeatureIndex{{1, 3}, {1, 1}}));
    CHECK(canonical_less(FeatureIndex{{1, 2}, {1, 1}}, FeatureIndex{{2, 1}, {1, 1}}));
    CHECK(canonical_less(FeatureIndex{{1, 2}, {1, 1}}, FeatureIndex{{1, 2}, {1, 3}}));
    CHECK_FALSE(canonical_less(FeatureIndex{{1, 2}, {1, 3}}, FeatureIndex{{1, 2}, {1, 3}}));
}
