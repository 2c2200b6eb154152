#include "eof/baselines.hpp"

#include "eof/error.hpp"
#include "eof/parallel.hpp"
#include "eof/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace eof {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_shape(int dim, std::size_t num_features, double sigma) {
    if (dim < 1) throw DimError("dimension must be >= 1");
    if (num_features < 1) throw InvalidM("number of features must be >= 1");
    if (!(sigma > 0.0 && std::isfinite(sigma))) throw InvalidData("sigma must be positive and finite");
}

Vector sample_phases(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    Vector b(static_cast<Eigen::Index>(n));
    for (auto& v : b) {
        v = uniform(rng);
        if (v >= kTwoPi) v = 0.0;
    }
    return b;
}

// Projections Z(r, m) = (1/sqrt(M)) cos(x_r^T gamma_m + b_m).
void project_row(const RandomFeatureMap& map, std::span<const double> x, double* out) {
    const std::size_t m_count = map.size();
    const std::size_t dim = map.dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m_count));
    for (std::size_t m = 0; m < m_count; ++m) {
        const double* gamma = map.frequencies.data() + m * dim;
        const double arg = simd::dot(std::span<const double>(gamma, dim), x) + map.phases(static_cast<Eigen::Index>(m));
        out[m] = scale * std::cos(arg);
    }
}

RandomFeatureMap select_top(const RandomFeatureMap& pool, const std::vector<double>& scores,
                            std::size_t num_features, RfMethod method) {
    if (num_features < 1 || num_features > pool.size()) {
        throw InvalidM("M = " + std::to_string(num_features) + " outside [1, " + std::to_string(pool.size()) + "]");
    }
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    order.resize(num_features);
    std::sort(order.begin(), order.end());

    RandomFeatureMap out;
    out.method = method;
    out.sigma = pool.sigma;
    out.seed = pool.seed;
    out.pool_size = pool.size();
    out.frequencies.resize(static_cast<Eigen::Index>(num_features), pool.frequencies.cols());
    out.phases.resize(static_cast<Eigen::Index>(num_features));
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto src = static_cast<Eigen::Index>(order[k]);
        out.frequencies.row(static_cast<Eigen::Index>(k)) = pool.frequencies.row(src);
        out.phases(static_cast<Eigen::Index>(k)) = pool.phases(src);
    }
    return out;
}

// sum_i y_i z_m(x_i) for every pool member.
std::vector<double> label_correlations(const RandomFeatureMap& pool, const Matrix& X, const Vector& y) {
    if (X.rows() != y.size()) throw DimError("one label per sample required");
    if (static_cast<std::size_t>(X.cols()) != pool.dim()) throw DimError("data width does not match map");
    std::vector<double> acc(pool.size(), 0.0);
    std::vector<double> z(pool.size());
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        project_row(pool, std::span<const double>(X.row(r).data(), pool.dim()), z.data());
        simd::axpy(y(r), z, acc);
    }
    return acc;
}

}  // namespace

std::string_view method_name(RfMethod method) noexcept {
    switch (method) {
        case RfMethod::RKS: return "rks";
        case RfMethod::ORF: return "orf";
        case RfMethod::LKRF: return "lkrf";
        case RfMethod::EERF: return "eerf";
    }
    return "rks";
}

RandomFeatureMap rks_map(int dim, std::size_t num_features, double sigma, std::uint64_t seed) {
    check_shape(dim, num_features, sigma);
    std::mt19937_64 rng(seed);
    std::cauchy_distribution<double> cauchy(0.0, 1.0);

    RandomFeatureMap map;
    map.method = RfMethod::RKS;
    map.sigma = sigma;
    map.seed = seed;
    map.frequencies.resize(static_cast<Eigen::Index>(num_features), dim);
    for (Eigen::Index m = 0; m < map.frequencies.rows(); ++m) {
        for (Eigen::Index d = 0; d < dim; ++d) map.frequencies(m, d) = sigma * cauchy(rng);
    }
    map.phases = sample_phases(num_features, rng);
    return map;
}

RandomFeatureMap orf_map(int dim, std::size_t num_features, double sigma, std::uint64_t seed) {
    check_shape(dim, num_features, sigma);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(static_cast<double>(dim));

    RandomFeatureMap map;
    map.method = RfMethod::ORF;
    map.sigma = sigma;
    map.seed = seed;
    map.frequencies.resize(static_cast<Eigen::Index>(num_features), dim);

    const std::size_t blocks = (num_features + static_cast<std::size_t>(dim) - 1) / static_cast<std::size_t>(dim);
    Eigen::Index row = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        Eigen::MatrixXd G(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) G(i, j) = normal(rng);
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        Eigen::MatrixXd Q = qr.householderQ();
        const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
        // Sign fix so Q is Haar distributed.
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (R(j, j) < 0.0) Q.col(j) *= -1.0;
        }
        for (Eigen::Index i = 0; i < dim && row < map.frequencies.rows(); ++i, ++row) {
            const double s = std::sqrt(chi2(rng));
            map.frequencies.row(row) = sigma * s * Q.row(i);
        }
    }
    map.phases = sample_phases(num_features, rng);
    return map;
}

std::vector<double> alignment_scores(const RandomFeatureMap& pool, const Matrix& X, const Vector& y) {
    auto scores = label_correlations(pool, X, y);
    for (auto& s : scores) s *= s;
    return scores;
}

std::vector<double> energy_scores(const RandomFeatureMap& pool, const Matrix& X, const Vector& y) {
    auto scores = label_correlations(pool, X, y);
    const double inv_n = X.rows() > 0 ? 1.0 / static_cast<double>(X.rows()) : 0.0;
    for (auto& s : scores) s = std::abs(s * inv_n);
    return scores;
}

RandomFeatureMap lkrf_select(const RandomFeatureMap& pool, const Matrix& X, const Vector& y,
                             std::size_t num_features) {
    return select_top(pool, alignment_scores(pool, X, y), num_features, RfMethod::LKRF);
}

RandomFeatureMap eerf_select(const RandomFeatureMap& pool, const Matrix& X, const Vector& y,
                             std::size_t num_features) {
    return select_top(pool, energy_scores(pool, X, y), num_features, RfMethod::EERF);
}

Vector rf_embed(const RandomFeatureMap& map, std::span<const double> x) {
    if (x.size() != map.dim()) throw DimError("point dimension does not match map");
    Vector z(static_cast<Eigen::Index>(map.size()));
    project_row(map, x, z.data());
    return z;
}

Matrix rf_embed_batch(const RandomFeatureMap& map, const Matrix& X, unsigned threads) {
    if (static_cast<std::size_t>(X.cols()) != map.dim()) throw DimError("data width does not match map");
    Matrix Z(X.rows(), static_cast<Eigen::Index>(map.size()));
    parallel_for(static_cast<std::size_t>(X.rows()), threads == 0 ? default_threads() : threads,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t r = begin; r < end; ++r) {
                         const auto i = static_cast<Eigen::Index>(r);
                         project_row(map, std::span<const double>(X.row(i).data(), map.dim()), Z.row(i).data());
                     }
                 });
    return Z;
}

double rf_kernel_estimate(const RandomFeatureMap& map, std::span<const double> x, std::span<const double> xp) {
    const Vector a = rf_embed(map, x);
    const Vector b = rf_embed(map, xp);
    return 2.0 * a.dot(b);
}

}  // namespace eof
