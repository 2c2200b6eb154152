#pragma once

// Random-feature baselines, all of the form
//
//     z(x) = (1/sqrt(M)) [cos(x^T gamma_m + b_m)]_{m=1..M}
//
//   RKS   gamma ~ sigma * Cauchy(0, 1) iid       -> Laplace kernel exp(-sigma |x - x'|_1)
//   ORF   gamma rows of sigma * S * Q per D x D  -> Gaussian kernel exp(-sigma^2 |x - x'|^2 / 2)
//         block, Q from the QR of a Gaussian matrix, S ~ chi_D diagonal
//   LKRF  top-M of an RKS pool by target alignment (sum_i y_i z_m(x_i))^2
//   EERF  top-M of an RKS pool by |(1/N) sum_i y_i z_m(x_i)|
//
// With this scaling E[z(x)^T z(x')] = k(x, x') / 2; rf_kernel_estimate
// returns the unbiased 2 z(x)^T z(x').

#include "eof/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace eof {

enum class RfMethod { RKS, ORF, LKRF, EERF };

struct RandomFeatureMap {
    RfMethod method = RfMethod::RKS;
    Matrix frequencies;  // M x D, row m is gamma_m
    Vector phases;       // M entries in [0, 2 pi)
    double sigma = 1.0;
    std::uint64_t seed = 0;
    std::size_t pool_size = 0;  // M0 for LKRF / EERF, 0 otherwise

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(frequencies.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(frequencies.cols()); }
};

[[nodiscard]] std::string_view method_name(RfMethod method) noexcept;

[[nodiscard]] RandomFeatureMap rks_map(int dim, std::size_t num_features, double sigma, std::uint64_t seed);

// When M > D, ceil(M / D) independent blocks are stacked and truncated to M rows.
[[nodiscard]] RandomFeatureMap orf_map(int dim, std::size_t num_features, double sigma, std::uint64_t seed);

// Per-candidate selection scores of a pool on training data.
[[nodiscard]] std::vector<double> alignment_scores(const RandomFeatureMap& pool, const Matrix& X, const Vector& y);
[[nodiscard]] std::vector<double> energy_scores(const RandomFeatureMap& pool, const Matrix& X, const Vector& y);

// Keep the top-M candidates (ties by pool index); survivors stay in pool
// order and are copied verbatim. Throw InvalidM when M exceeds the pool.
[[nodiscard]] RandomFeatureMap lkrf_select(const RandomFeatureMap& pool, const Matrix& X, const Vector& y,
                                           std::size_t num_features);
[[nodiscard]] RandomFeatureMap eerf_select(const RandomFeatureMap& pool, const Matrix& X, const Vector& y,
                                           std::size_t num_features);

[[nodiscard]] Vector rf_embed(const RandomFeatureMap& map, std::span<const double> x);
[[nodiscard]] Matrix rf_embed_batch(const RandomFeatureMap& map, const Matrix& X, unsigned threads = 0);

[[nodiscard]] double rf_kernel_estimate(const RandomFeatureMap& map, std::span<const double> x,
                                        std::span<const double> xp);

}  // namespace eof
