#pragma once

// Feature designs. The entropy-maximizing choice of at most M features is a
// cardinality-constrained maximization of sum C_{l,i}; with unit item
// weights the top-M constants are exactly optimal (the NP-hard knapsack
// case needs non-unit weights, which never occur here). For kernels whose
// constant decreases in |l| this yields the sparse grid
//
//     S*_n = { (l, i) : l_d >= 1, |l| <= n + D - 1, i in B_l }.

#include "eof/features.hpp"
#include "eof/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace eof {

// Ordered, duplicate-free feature design with a frozen column order.
class IndexSet {
public:
    IndexSet() = default;

    // Validates every index, sorts canonically and rejects duplicates.
    explicit IndexSet(std::vector<FeatureIndex> indices, std::optional<int> level_cap = std::nullopt,
                      std::optional<std::uint64_t> seed = std::nullopt);

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const FeatureIndex& operator[](std::size_t col) const { return indices_[col]; }
    [[nodiscard]] const std::vector<FeatureIndex>& indices() const noexcept { return indices_; }
    [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return indices_.end(); }

    // Present when the set is an exact S*_n.
    [[nodiscard]] std::optional<int> level_cap() const noexcept { return level_cap_; }
    // Present when the set came out of a random truncation.
    [[nodiscard]] std::optional<std::uint64_t> seed() const noexcept { return seed_; }

    [[nodiscard]] std::optional<std::size_t> column_of(const FeatureIndex& idx) const;

    // Distinct level vectors, in canonical order.
    [[nodiscard]] const std::vector<std::vector<int>>& levels() const noexcept { return levels_; }

    friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.indices_ == b.indices_; }

private:
    std::vector<FeatureIndex> indices_;
    std::unordered_map<FeatureIndex, std::size_t, FeatureIndexHash> column_;
    std::vector<std::vector<int>> levels_;
    std::size_t dim_ = 0;
    std::optional<int> level_cap_;
    std::optional<std::uint64_t> seed_;
};

// |S*_n| = sum_{j=D}^{n+D-1} C(j-1, D-1) 2^{j-D}.
[[nodiscard]] std::size_t sparse_grid_size(int dim, int n);

// Number of level vectors (and so the nonzero count of a generic embedding):
// C(n+D-1, D).
[[nodiscard]] std::size_t sparse_grid_levels(int dim, int n);

// Smallest n with |S*_n| >= M.
[[nodiscard]] int level_for_size(int dim, std::size_t num_features);

// S*_n in canonical order. Throws InvalidLevel for n < 1.
[[nodiscard]] IndexSet enumerate_sparse_grid(int dim, int n);

struct Selection {
    IndexSet set;
    bool truncated_request = false;  // M exceeded the candidate count
};

// Top-M candidates by weight, ties broken by canonical order. `weights` is
// aligned with the candidates' column order.
[[nodiscard]] Selection entropic_select(const IndexSet& candidates, std::span<const double> weights,
                                        std::size_t num_features);
[[nodiscard]] Selection entropic_select(const IndexSet& candidates, const KernelSpec& spec,
                                        std::size_t num_features);

// Uniform random M-subset of an S*_n with |S*_{n-1}| < M <= |S*_n|, keeping
// canonical order among the survivors. Throws InvalidM.
[[nodiscard]] IndexSet truncate_random(const IndexSet& full, std::size_t num_features, std::uint64_t seed);

// Picks n from M and truncates when M is not a full sparse-grid size.
[[nodiscard]] IndexSet design_for_size(int dim, std::size_t num_features, std::uint64_t seed);

}  // namespace eof
