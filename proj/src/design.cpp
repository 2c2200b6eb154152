#include "eof/design.hpp"

#include "eof/error.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>
#include <string>

namespace eof {

namespace {

constexpr std::size_t kMaxEnumeration = std::size_t{1} << 27;

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

void check_args(int dim, int n) {
    if (dim < 1) throw DimError("dimension must be >= 1");
    if (n < 1 || n > KernelSpec::kMaxLevel) {
        throw InvalidLevel("level cap " + std::to_string(n) + " outside [1, " +
                           std::to_string(KernelSpec::kMaxLevel) + "]");
    }
}

// Compositions of `total` into `level.size()` positive parts, lexicographic.
void compositions(std::vector<int>& level, std::size_t d, int remaining,
                  std::vector<std::vector<int>>& out) {
    const int slots_after = static_cast<int>(level.size() - d - 1);
    if (slots_after == 0) {
        level[d] = remaining;
        out.push_back(level);
        return;
    }
    for (int l = 1; l <= remaining - slots_after; ++l) {
        level[d] = l;
        compositions(level, d + 1, remaining - l, out);
    }
}

}  // namespace

IndexSet::IndexSet(std::vector<FeatureIndex> indices, std::optional<int> level_cap,
                   std::optional<std::uint64_t> seed)
    : indices_(std::move(indices)), level_cap_(level_cap), seed_(seed) {
    if (!indices_.empty()) dim_ = indices_.front().dim();
    for (const auto& idx : indices_) {
        validate(idx);
        if (idx.dim() != dim_) throw DimError("index set mixes dimensions");
    }
    if (!std::is_sorted(indices_.begin(), indices_.end(), canonical_less)) {
        std::sort(indices_.begin(), indices_.end(), canonical_less);
    }
    column_.reserve(indices_.size());
    for (std::size_t c = 0; c < indices_.size(); ++c) {
        if (!column_.emplace(indices_[c], c).second) throw InvalidIndex("duplicate feature index");
        if (levels_.empty() || levels_.back() != indices_[c].level) levels_.push_back(indices_[c].level);
    }
}

std::optional<std::size_t> IndexSet::column_of(const FeatureIndex& idx) const {
    const auto it = column_.find(idx);
    if (it == column_.end()) return std::nullopt;
    return it->second;
}

std::size_t sparse_grid_size(int dim, int n) {
    check_args(dim, n);
    const auto D = static_cast<std::size_t>(dim);
    std::size_t total = 0;
    for (std::size_t j = D; j <= static_cast<std::size_t>(n) + D - 1; ++j) {
        total += binomial(j - 1, D - 1) << (j - D);
    }
    return total;
}

std::size_t sparse_grid_levels(int dim, int n) {
    check_args(dim, n);
    return binomial(static_cast<std::size_t>(n + dim - 1), static_cast<std::size_t>(dim));
}

int level_for_size(int dim, std::size_t num_features) {
    if (num_features < 1) throw InvalidM("number of features must be >= 1");
    for (int n = 1; n <= KernelSpec::kMaxLevel; ++n) {
        if (sparse_grid_size(dim, n) >= num_features) return n;
    }
    throw InvalidM("number of features exceeds the deepest sparse grid");
}

IndexSet enumerate_sparse_grid(int dim, int n) {
    check_args(dim, n);
    const std::size_t expected = sparse_grid_size(dim, n);
    if (expected > kMaxEnumeration) throw InvalidLevel("sparse grid too large to enumerate");

    std::vector<std::vector<int>> levels;
    std::vector<int> scratch(static_cast<std::size_t>(dim));
    for (int s = dim; s <= n + dim - 1; ++s) compositions(scratch, 0, s, levels);

    std::vector<FeatureIndex> out;
    out.reserve(expected);
    for (const auto& level : levels) {
        FeatureIndex idx{level, std::vector<std::int64_t>(level.size(), 1)};
        while (true) {
            out.push_back(idx);
            // Odometer over odd positions, last dimension fastest.
            std::size_t d = idx.dim();
            while (d-- > 0) {
                idx.pos[d] += 2;
                if (idx.pos[d] < (std::int64_t{1} << level[d])) break;
                idx.pos[d] = 1;
            }
            if (d == static_cast<std::size_t>(-1)) break;
        }
    }
    return IndexSet(std::move(out), n);
}

Selection entropic_select(const IndexSet& candidates, std::span<const double> weights,
                          std::size_t num_features) {
    if (num_features < 1) throw InvalidM("number of features must be >= 1");
    if (weights.size() != candidates.size()) throw DimError("one weight per candidate required");
    for (double w : weights) {
        if (!(w > 0.0 && std::isfinite(w))) throw InvalidData("weights must be finite and positive");
    }
    Selection result;
    result.truncated_request = num_features > candidates.size();
    const std::size_t keep = std::min(num_features, candidates.size());

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    // Candidates are already canonical, so a stable sort breaks ties canonically.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    order.resize(keep);

    std::vector<FeatureIndex> chosen;
    chosen.reserve(keep);
    for (std::size_t c : order) chosen.push_back(candidates[c]);
    result.set = IndexSet(std::move(chosen));
    return result;
}

Selection entropic_select(const IndexSet& candidates, const KernelSpec& spec, std::size_t num_features) {
    std::vector<double> weights;
    weights.reserve(candidates.size());
    for (const auto& idx : candidates) weights.push_back(norm_const(spec, idx.level));
    return entropic_select(candidates, weights, num_features);
}

IndexSet truncate_random(const IndexSet& full, std::size_t num_features, std::uint64_t seed) {
    std::size_t lower = 0;
    if (const auto n = full.level_cap(); n && *n > 1) {
        lower = sparse_grid_size(static_cast<int>(full.dim()), *n - 1);
    }
    if (num_features <= lower || num_features > full.size() || num_features == 0) {
        throw InvalidM("M = " + std::to_string(num_features) + " outside (" + std::to_string(lower) +
                       ", " + std::to_string(full.size()) + "]");
    }
    if (num_features == full.size()) return full;

    std::mt19937_64 rng(seed);
    std::vector<FeatureIndex> chosen;
    chosen.reserve(num_features);
    // Selection sampling keeps the relative order of the input.
    std::sample(full.begin(), full.end(), std::back_inserter(chosen), num_features, rng);
    return IndexSet(std::move(chosen), std::nullopt, seed);
}

IndexSet design_for_size(int dim, std::size_t num_features, std::uint64_t seed) {
    const int n = level_for_size(dim, num_features);
    IndexSet full = enumerate_sparse_grid(dim, n);
    if (full.size() == num_features) return full;
    return truncate_random(full, num_features, seed);
}

}  // namespace eof
