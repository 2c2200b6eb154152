#include "eof/embed.hpp"

#include "eof/error.hpp"
#include "eof/features.hpp"
#include "eof/parallel.hpp"

#include <cmath>

namespace eof {

Vector SparseVec::to_dense() const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < cols.size(); ++k) out(cols[k]) = values[k];
    return out;
}

Matrix SparseMat::to_dense() const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            out(static_cast<Eigen::Index>(r), col_idx[k]) = values[k];
        }
    }
    return out;
}

void SparseMat::append_row(const SparseVec& row) {
    if (row.dim != cols) throw DimError("row width does not match matrix");
    col_idx.insert(col_idx.end(), row.cols.begin(), row.cols.end());
    values.insert(values.end(), row.values.begin(), row.values.end());
    row_ptr.push_back(values.size());
    ++rows;
}

double dot(const SparseVec& a, const SparseVec& b) {
    if (a.dim != b.dim) throw DimError("sparse vectors differ in length");
    double acc = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.cols.size() && j < b.cols.size()) {
        if (a.cols[i] < b.cols[j]) {
            ++i;
        } else if (b.cols[j] < a.cols[i]) {
            ++j;
        } else {
            acc += a.values[i++] * b.values[j++];
        }
    }
    return acc;
}

std::int64_t active_position(double x, int level) {
    const double t = std::ldexp(x, level);
    const auto up = static_cast<std::int64_t>(std::ceil(t));
    if (up % 2 != 0) return up;
    const auto down = static_cast<std::int64_t>(std::floor(t));
    if (down % 2 != 0) return down;
    return 0;
}

SparseVec embed(const KernelSpec& spec, const IndexSet& design, std::span<const double> x, FeatureScale scale) {
    const auto dim = static_cast<std::size_t>(spec.dim());
    if (x.size() != dim) throw DimError("point dimension does not match kernel");
    if (!design.empty() && design.dim() != dim) throw DimError("design dimension does not match kernel");

    std::vector<double> point(dim);
    for (std::size_t d = 0; d < dim; ++d) point[d] = spec.admit(x[d]);

    SparseVec z;
    z.dim = design.size();
    FeatureIndex candidate{std::vector<int>(dim), std::vector<std::int64_t>(dim)};
    for (const auto& level : design.levels()) {
        bool degenerate = false;
        for (std::size_t d = 0; d < dim; ++d) {
            candidate.level[d] = level[d];
            candidate.pos[d] = active_position(point[d], level[d]);
            if (candidate.pos[d] == 0) {
                degenerate = true;
                break;
            }
        }
        if (degenerate) continue;
        const auto col = design.column_of(candidate);
        if (!col) continue;

        double value = 1.0;
        for (std::size_t d = 0; d < dim && value != 0.0; ++d) {
            value *= phi_1d(spec, level[d], candidate.pos[d], point[d]);
        }
        if (value == 0.0) continue;
        const double c = norm_const(spec, level);
        value *= scale == FeatureScale::Normalized ? std::sqrt(c) : c;
        z.cols.push_back(static_cast<std::uint32_t>(*col));
        z.values.push_back(value);
    }
    return z;
}

SparseMat embed_batch(const KernelSpec& spec, const IndexSet& design, const Matrix& X, FeatureScale scale,
                      unsigned threads) {
    if (X.cols() != spec.dim()) throw DimError("data width does not match kernel dimension");
    const auto n = static_cast<std::size_t>(X.rows());
    std::vector<SparseVec> rows(n);
    parallel_for(n, threads == 0 ? default_threads() : threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const auto row = X.row(static_cast<Eigen::Index>(r));
            rows[r] = embed(spec, design, std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                            scale);
        }
    });

    SparseMat F;
    F.cols = design.size();
    std::size_t total = 0;
    for (const auto& r : rows) total += r.nnz();
    F.col_idx.reserve(total);
    F.values.reserve(total);
    F.row_ptr.reserve(n + 1);
    for (const auto& r : rows) F.append_row(r);
    return F;
}

double kernel_approx(const KernelSpec& spec, const IndexSet& design, std::span<const double> x,
                     std::span<const double> xp) {
    if (design.empty()) return 0.0;
    return dot(embed(spec, design, x), embed(spec, design, xp));
}

}  // namespace eof
