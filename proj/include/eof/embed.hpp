#pragma once

// Sparse evaluation of the entropic optimal features
//
//     z(x) = [ s(l) * phi_{l,i}(x) ]_{(l,i) in S}
//
// For each level vector l only one position i can be nonzero at x, so the
// embedding touches one candidate per level instead of every feature.

#include "eof/design.hpp"
#include "eof/kernels.hpp"
#include "eof/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eof {

enum class FeatureScale {
    Normalized,  // s = sqrt(C_l); z(x)^T z(x') is the truncated kernel expansion
    Raw,         // s = C_l, unnormalized level scaling
};

struct SparseVec {
    std::size_t dim = 0;
    std::vector<std::uint32_t> cols;  // strictly increasing
    std::vector<double> values;

    [[nodiscard]] std::size_t nnz() const noexcept { return cols.size(); }
    [[nodiscard]] Vector to_dense() const;
};

// Compressed sparse rows.
struct SparseMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> col_idx;
    std::vector<double> values;

    [[nodiscard]] std::size_t nnz() const noexcept { return values.size(); }
    [[nodiscard]] Matrix to_dense() const;
    void append_row(const SparseVec& row);
};

[[nodiscard]] double dot(const SparseVec& a, const SparseVec& b);

// The unique odd position with x in the closure of its support at `level`,
// or 0 when x * 2^level is an even integer (every feature vanishes there).
[[nodiscard]] std::int64_t active_position(double x, int level);

[[nodiscard]] SparseVec embed(const KernelSpec& spec, const IndexSet& design, std::span<const double> x,
                              FeatureScale scale = FeatureScale::Normalized);

// Row r of the result is embed(X.row(r)). Rows are computed in parallel and
// the output does not depend on the thread count.
[[nodiscard]] SparseMat embed_batch(const KernelSpec& spec, const IndexSet& design, const Matrix& X,
                                    FeatureScale scale = FeatureScale::Normalized,
                                    unsigned threads = 0);

// sum_{(l,i) in S} C_{l,i} phi_{l,i}(x) phi_{l,i}(x').
[[nodiscard]] double kernel_approx(const KernelSpec& spec, const IndexSet& design, std::span<const double> x,
                                   std::span<const double> xp);

}  // namespace eof
