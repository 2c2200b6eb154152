#include "eof/design.hpp"
#include "eof/error.hpp"
#include "eof/kernels.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace eof;

namespace {

std::set<oracle::Index> as_set(const IndexSet& s) {
    std::set<oracle::Index> out;
    for (const auto& idx : s) out.insert({idx.level, idx.pos});
    return out;
}

// Maximum of sum(weights over S) over all |S| <= M subsets, by enumeration.
double brute_best(const std::vector<double>& w, std::size_t M) {
    const std::size_t n = w.size();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > M) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (1u << k)) s += w[k];
        }
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

TEST_CASE("sparse grid reference sets") {
    const auto d1 = enumerate_sparse_grid(1, 3);
    CHECK(d1.size() == 7);
    CHECK(as_set(d1) == oracle::brute_sparse_grid(1, 3));
    CHECK(d1.level_cap() == 3);

    const auto d2 = enumerate_sparse_grid(2, 2);
    REQUIRE(d2.size() == 5);
    CHECK(d2[0] == FeatureIndex{{1, 1}, {1, 1}});
    CHECK(d2[1] == FeatureIndex{{1, 2}, {1, 1}});
    CHECK(d2[2] == FeatureIndex{{1, 2}, {1, 3}});
    CHECK(d2[3] == FeatureIndex{{2, 1}, {1, 1}});
    CHECK(d2[4] == FeatureIndex{{2, 1}, {3, 1}});

    const auto one = enumerate_sparse_grid(1, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == FeatureIndex{{1}, {1}});

    CHECK_THROWS_AS((void)enumerate_sparse_grid(2, 0), InvalidLevel);
    CHECK_THROWS_AS((void)enumerate_sparse_grid(0, 2), DimError);
}

TEST_CASE("cardinality matches brute-force enumeration") {
    for (int D = 1; D <= 4; ++D) {
        for (int n = 1; n <= 6; ++n) {
            CAPTURE(D);
            CAPTURE(n);
            const auto brute = oracle::brute_sparse_grid(D, n);
            const auto set = enumerate_sparse_grid(D, n);
            CHECK(set.size() == brute.size());
            CHECK(sparse_grid_size(D, n) == brute.size());
            CHECK(as_set(set) == brute);
            CHECK(sparse_grid_levels(D, n) == static_cast<std::size_t>(oracle::binomial(n + D - 1, D)));
            CHECK(set.levels().size() == sparse_grid_levels(D, n));
        }
    }
    CHECK(sparse_grid_size(2, 1) == 1);
    CHECK(sparse_grid_size(2, 3) == 17);
    CHECK(sparse_grid_size(2, 4) == 49);
    CHECK(sparse_grid_size(2, 5) == 129);
}

TEST_CASE("canonical order and nesting") {
    for (int D = 1; D <= 3; ++D) {
        for (int n = 2; n <= 5; ++n) {
            const auto set = enumerate_sparse_grid(D, n);
            for (std::size_t k = 0; k + 1 < set.size(); ++k) CHECK(canonical_less(set[k], set[k + 1]));
            const auto prev = as_set(enumerate_sparse_grid(D, n - 1));
            const auto cur = as_set(set);
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            for (std::size_t k = 0; k < set.size(); ++k) CHECK(set.column_of(set[k]) == k);
        }
    }
}

TEST_CASE("index sets reject duplicates and invalid members") {
    CHECK_THROWS_AS(IndexSet({FeatureIndex{{1}, {1}}, FeatureIndex{{1}, {1}}}), InvalidIndex);
    CHECK_THROWS_AS(IndexSet({FeatureIndex{{2}, {2}}}), InvalidIndex);
    CHECK_THROWS_AS(IndexSet({FeatureIndex{{1}, {1}}, FeatureIndex{{1, 1}, {1, 1}}}), DimError);
    const IndexSet shuffled({FeatureIndex{{2}, {3}}, FeatureIndex{{1}, {1}}, FeatureIndex{{2}, {1}}});
    CHECK(shuffled == enumerate_sparse_grid(1, 2));
    CHECK_FALSE(shuffled.column_of(FeatureIndex{{3}, {1}}).has_value());
}

TEST_CASE("entropic selection reference cases") {
    const auto s2 = enumerate_sparse_grid(2, 2);
    const auto lap = KernelSpec::laplace(1.0, 2);
    const auto all = entropic_select(s2, lap, 5);
    CHECK(all.set == s2);
    CHECK_FALSE(all.truncated_request);

    const auto top = entropic_select(s2, lap, 1);
    REQUIRE(top.set.size() == 1);
    CHECK(top.set[0] == FeatureIndex{{1, 1}, {1, 1}});

    const auto over = entropic_select(s2, lap, 9);
    CHECK(over.set == s2);
    CHECK(over.truncated_request);
}

TEST_CASE("entropic selection is optimal against exhaustive subsets") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    const auto pool = enumerate_sparse_grid(1, 4);  // 15 candidates
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 15;
        std::vector<FeatureIndex> cands(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
        const IndexSet set(cands);
        std::vector<double> w(n);
        for (auto& v : w) v = u(rng);
        const std::size_t M = 1 + rng() % n;
        const auto sel = entropic_select(set, w, M);
        double got = 0.0;
        for (const auto& idx : sel.set) got += w[*set.column_of(idx)];
        CHECK(sel.set.size() == M);
        CHECK(got == doctest::Approx(brute_best(w, M)).epsilon(1e-12));
    }
}

TEST_CASE("entropic selection breaks ties canonically") {
    const auto set = enumerate_sparse_grid(2, 3);
    const std::vector<double> flat(set.size(), 1.0);
    const auto sel = entropic_select(set, flat, 4);
    REQUIRE(sel.set.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(sel.set[k] == set[k]);
}

TEST_CASE("Laplace constants select the sparse grid") {
    for (int D = 1; D <= 3; ++D) {
        for (int n = 1; n <= 4; ++n) {
            const auto candidates = enumerate_sparse_grid(D, n + 2);
            for (double w : {0.1, 0.5, 1.0, 2.0}) {
                const auto sel = entropic_select(candidates, KernelSpec::laplace(w, D), sparse_grid_size(D, n));
                CAPTURE(w);
                CHECK(as_set(sel.set) == as_set(enumerate_sparse_grid(D, n)));
            }
        }
    }
}

TEST_CASE("large bandwidths reorder the Laplace constants") {
    // tanh saturates: C_(2,2) exceeds C_(1,3) once w 2^-1 is large.
    const auto spec = KernelSpec::laplace(10.0, 2);
    const int a[] = {2, 2};
    const int b[] = {1, 3};
    const int c[] = {1, 4};
    CHECK(norm_const(spec, a) > norm_const(spec, b));
    CHECK(norm_const(spec, a) > norm_const(spec, c));
    const auto sel = entropic_select(enumerate_sparse_grid(2, 6), spec, sparse_grid_size(2, 4));
    CHECK(as_set(sel.set) != as_set(enumerate_sparse_grid(2, 4)));
}

TEST_CASE("random truncation") {
    const auto full = enumerate_sparse_grid(1, 3);
    CHECK(truncate_random(full, 7, 1) == full);
    CHECK(truncate_random(full, 7, 99) == full);

    const auto a = truncate_random(full, 5, 42);
    const auto b = truncate_random(full, 5, 42);
    CHECK(a == b);
    CHECK(a.size() == 5);
    CHECK(a.seed() == 42);
    const auto fs = as_set(full);
    for (const auto& idx : a) CHECK(fs.count({idx.level, idx.pos}) == 1);
    for (std::size_t k = 0; k + 1 < a.size(); ++k) CHECK(canonical_less(a[k], a[k + 1]));

    CHECK_THROWS_AS((void)truncate_random(full, 3, 1), InvalidM);
    CHECK_THROWS_AS((void)truncate_random(full, 8, 1), InvalidM);
}

TEST_CASE("random truncation varies with the seed") {
    // With the range rule the smallest legal M for S*_3 is 4; each pair of
    // draws coincides with probability 1 / C(7, 4).
    const auto full = enumerate_sparse_grid(1, 3);
    const auto base = truncate_random(full, 4, 0);
    int same = 0;
    std::vector<int> hits(full.size(), 0);
    for (std::uint64_t s = 1; s <= 100; ++s) {
        const auto t = truncate_random(full, 4, s);
        same += (t == base);
        for (const auto& idx : t) ++hits[*full.column_of(idx)];
    }
    CHECK(same < 15);
    for (int h : hits) CHECK(h > 25);
}

TEST_CASE("design_for_size picks the covering level") {
    CHECK(level_for_size(2, 1) == 1);
    CHECK(level_for_size(2, 5) == 2);
    CHECK(level_for_size(2, 6) == 3);
    CHECK(level_for_size(2, 17) == 3);
    CHECK(design_for_size(2, 17, 3) == enumerate_sparse_grid(2, 3));
    CHECK(design_for_size(2, 30, 3).size() == 30);
    CHECK_THROWS_AS((void)design_for_size(2, 0, 3), InvalidM);
}
