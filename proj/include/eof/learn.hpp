#pragma once

// Regularized empirical risk minimization over a feature matrix F (N x M):
//
//   ridge     min_w (1/N) |F w - y|^2 + lambda |w|^2
//             <=> (F^T F + lambda N I) w = F^T y
//   logistic  min_w (1/N) sum_i log(1 + exp(-y_i F_i w)) + lambda |w|^2
//
// Both accumulate the M x M Gram matrix directly from the rows of F, so a
// sparse F costs O(sum_r nnz(row_r)^2) instead of O(N M^2).

#include "eof/embed.hpp"
#include "eof/feature_map.hpp"
#include "eof/types.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace eof {

enum class Task { Regression, Classification };

[[nodiscard]] std::string_view task_name(Task task) noexcept;
// Accepts "reg" and "clf". Throws std::invalid_argument.
[[nodiscard]] Task parse_task(std::string_view name);

// lambda = N^{-1/2}.
[[nodiscard]] double default_lambda(std::size_t num_samples);

struct FitReport {
    int iterations = 0;
    double grad_norm = 0.0;
    std::vector<double> objective;  // per iterate, logistic only
    double solve_seconds = 0.0;
};

struct Model {
    Vector weights;
    std::optional<FeatureMap> feature_map;
    double lambda = 0.0;
    Task task = Task::Regression;
    double train_seconds = 0.0;    // Gram accumulation + solve
    double feature_seconds = 0.0;  // building the feature matrix
    std::size_t nnz_F = 0;
    FitReport report;
};

struct LogisticOptions {
    int max_iter = 100;
    double tol = 1e-8;  // on the gradient norm
};

// F^T diag(w) F, w = 1 when empty. The reduction order is fixed by N and M.
[[nodiscard]] Eigen::MatrixXd gram(const SparseMat& F, std::span<const double> row_weights = {},
                                   unsigned threads = 0);
[[nodiscard]] Eigen::MatrixXd gram(const Matrix& F, std::span<const double> row_weights = {},
                                   unsigned threads = 0);

[[nodiscard]] Model ridge_fit(const FeatureMatrix& F, const Vector& y, double lambda, unsigned threads = 0);

[[nodiscard]] Model logistic_fit(const FeatureMatrix& F, const Vector& y, double lambda,
                                 const LogisticOptions& options = {}, unsigned threads = 0);

[[nodiscard]] Vector multiply(const FeatureMatrix& F, const Vector& w);

[[nodiscard]] Vector predict(const Model& model, const FeatureMatrix& Z);

// Regression: mean squared error. Classification: misclassified fraction of
// sign(F w), with sign(0) = +1.
[[nodiscard]] double test_error(const Model& model, const FeatureMatrix& Z, const Vector& y);
[[nodiscard]] double test_error(Task task, const Vector& predictions, const Vector& y);

// Builds features with `map`, fits, and records timings and nnz(F).
[[nodiscard]] Model train(const FeatureMap& map, const Matrix& X, const Vector& y, Task task, double lambda,
                          unsigned threads = 0);

// Applies the model's own feature map to raw points.
[[nodiscard]] Vector predict_points(const Model& model, const Matrix& X, unsigned threads = 0);

}  // namespace eof
