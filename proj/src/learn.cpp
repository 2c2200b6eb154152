#include "eof/learn.hpp"

#include "eof/error.hpp"
#include "eof/parallel.hpp"
#include "eof/simd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eof {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fixed partition of the rows: depends on N and M only, never on threads.
std::size_t gram_chunks(std::size_t n, std::size_t m) {
    constexpr std::size_t kRowsPerChunk = 2048;
    constexpr std::size_t kMaxChunks = 16;
    constexpr std::size_t kMemoryBudget = std::size_t{1} << 22;  // doubles across partial Grams
    const std::size_t by_rows = (n + kRowsPerChunk - 1) / kRowsPerChunk;
    const std::size_t by_memory = std::max<std::size_t>(1, kMemoryBudget / std::max<std::size_t>(1, m * m));
    return std::max<std::size_t>(1, std::min({by_rows, kMaxChunks, by_memory}));
}

template <class AccumulateRows>
Eigen::MatrixXd reduce_gram(std::size_t n, std::size_t m, unsigned threads, AccumulateRows accumulate) {
    const std::size_t chunks = gram_chunks(n, m);
    const std::size_t per_chunk = (n + chunks - 1) / chunks;
    // Row-major upper triangles, one per chunk.
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(m * m, 0.0));
    parallel_for(chunks, threads == 0 ? default_threads() : threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const std::size_t r0 = c * per_chunk;
            const std::size_t r1 = std::min(n, r0 + per_chunk);
            accumulate(r0, r1, partial[c]);
        }
    });
    // Pairwise tree over chunk indices.
    for (std::size_t stride = 1; stride < chunks; stride *= 2) {
        for (std::size_t c = 0; c + stride < chunks; c += 2 * stride) {
            simd::axpy(1.0, partial[c + stride], partial[c]);
        }
    }
    Eigen::MatrixXd G(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    const auto& upper = partial.front();
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            const double v = upper[a * m + b];
            G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
            G(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
        }
    }
    return G;
}

void check_weights(std::span<const double> w, std::size_t n) {
    if (!w.empty() && w.size() != n) throw DimError("one weight per row required");
}

void check_targets(const FeatureMatrix& F, const Vector& y) {
    if (rows(F) != static_cast<std::size_t>(y.size())) throw DimError("one target per feature row required");
    if (rows(F) == 0) throw InvalidData("empty training set");
    if (!y.allFinite()) throw InvalidData("targets must be finite");
}

Eigen::MatrixXd gram_of(const FeatureMatrix& F, std::span<const double> w, unsigned threads) {
    return std::visit([&](const auto& m) { return gram(m, w, threads); }, F);
}

Vector transpose_multiply(const FeatureMatrix& F, const Vector& v) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(cols(F)));
    if (const auto* S = std::get_if<SparseMat>(&F)) {
        for (std::size_t r = 0; r < S->rows; ++r) {
            const double vr = v(static_cast<Eigen::Index>(r));
            for (std::size_t k = S->row_ptr[r]; k < S->row_ptr[r + 1]; ++k) out(S->col_idx[k]) += vr * S->values[k];
        }
    } else {
        const auto& D = std::get<Matrix>(F);
        const auto m = static_cast<std::size_t>(D.cols());
        for (Eigen::Index r = 0; r < D.rows(); ++r) {
            simd::axpy(v(r), std::span<const double>(D.row(r).data(), m), std::span<double>(out.data(), m));
        }
    }
    return out;
}

Vector solve_spd(Eigen::MatrixXd A, const Vector& b) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) return llt.solve(b);
    return A.ldlt().solve(b);
}

double logistic_loss(double margin) {
    // log(1 + e^{-m}) without overflow.
    return std::log1p(std::exp(-std::abs(margin))) + std::max(-margin, 0.0);
}

double logistic_objective(const Vector& margins, const Vector& w, double lambda) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) sum += logistic_loss(margins(i));
    return sum / static_cast<double>(margins.size()) + lambda * w.squaredNorm();
}

}  // namespace

std::string_view task_name(Task task) noexcept { return task == Task::Regression ? "reg" : "clf"; }

Task parse_task(std::string_view name) {
    if (name == "reg") return Task::Regression;
    if (name == "clf") return Task::Classification;
    throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

double default_lambda(std::size_t num_samples) {
    return 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, num_samples)));
}

Eigen::MatrixXd gram(const SparseMat& F, std::span<const double> row_weights, unsigned threads) {
    check_weights(row_weights, F.rows);
    const std::size_t m = F.cols;
    return reduce_gram(F.rows, m, threads, [&](std::size_t r0, std::size_t r1, std::vector<double>& G) {
        for (std::size_t r = r0; r < r1; ++r) {
            const double w = row_weights.empty() ? 1.0 : row_weights[r];
            const std::size_t begin = F.row_ptr[r];
            const std::size_t end = F.row_ptr[r + 1];
            for (std::size_t a = begin; a < end; ++a) {
                const double va = w * F.values[a];
                double* row = G.data() + static_cast<std::size_t>(F.col_idx[a]) * m;
                for (std::size_t b = a; b < end; ++b) row[F.col_idx[b]] += va * F.values[b];
            }
        }
    });
}

Eigen::MatrixXd gram(const Matrix& F, std::span<const double> row_weights, unsigned threads) {
    const auto n = static_cast<std::size_t>(F.rows());
    const auto m = static_cast<std::size_t>(F.cols());
    check_weights(row_weights, n);
    return reduce_gram(n, m, threads, [&](std::size_t r0, std::size_t r1, std::vector<double>& G) {
        for (std::size_t r = r0; r < r1; ++r) {
            const double w = row_weights.empty() ? 1.0 : row_weights[r];
            const double* row = F.data() + r * m;
            for (std::size_t a = 0; a < m; ++a) {
                const double va = w * row[a];
                if (va == 0.0) continue;
                simd::axpy(va, std::span<const double>(row + a, m - a), std::span<double>(G.data() + a * m + a, m - a));
            }
        }
    });
}

Vector multiply(const FeatureMatrix& F, const Vector& w) {
    if (cols(F) != static_cast<std::size_t>(w.size())) throw DimError("weight length does not match features");
    Vector out(static_cast<Eigen::Index>(rows(F)));
    if (const auto* S = std::get_if<SparseMat>(&F)) {
        for (std::size_t r = 0; r < S->rows; ++r) {
            double acc = 0.0;
            for (std::size_t k = S->row_ptr[r]; k < S->row_ptr[r + 1]; ++k) acc += S->values[k] * w(S->col_idx[k]);
            out(static_cast<Eigen::Index>(r)) = acc;
        }
    } else {
        const auto& D = std::get<Matrix>(F);
        const auto m = static_cast<std::size_t>(D.cols());
        for (Eigen::Index r = 0; r < D.rows(); ++r) {
            out(r) = simd::dot(std::span<const double>(D.row(r).data(), m), std::span<const double>(w.data(), m));
        }
    }
    return out;
}

Model ridge_fit(const FeatureMatrix& F, const Vector& y, double lambda, unsigned threads) {
    if (!(lambda > 0.0 && std::isfinite(lambda))) throw InvalidData("lambda must be positive and finite");
    check_targets(F, y);
    const auto start = Clock::now();
    const double n = static_cast<double>(rows(F));

    Eigen::MatrixXd A = gram_of(F, {}, threads);
    A.diagonal().array() += lambda * n;
    const Vector rhs = transpose_multiply(F, y);

    Model model;
    model.weights = solve_spd(std::move(A), rhs);
    model.lambda = lambda;
    model.task = Task::Regression;
    model.report.iterations = 1;
    model.report.solve_seconds = seconds_since(start);
    model.train_seconds = model.report.solve_seconds;
    model.nnz_F = nnz(F);
    if (!model.weights.allFinite()) throw InvalidData("ridge solve produced non-finite weights");
    return model;
}

Model logistic_fit(const FeatureMatrix& F, const Vector& y, double lambda, const LogisticOptions& options,
                   unsigned threads) {
    if (!(lambda > 0.0 && std::isfinite(lambda))) throw InvalidData("lambda must be positive and finite");
    check_targets(F, y);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 1.0 && y(i) != -1.0) throw InvalidData("logistic labels must be -1 or +1");
    }
    const auto start = Clock::now();
    const auto n = static_cast<std::size_t>(y.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    const auto m = static_cast<Eigen::Index>(cols(F));

    Model model;
    model.lambda = lambda;
    model.task = Task::Classification;
    model.weights = Vector::Zero(m);

    Vector margins = y.cwiseProduct(multiply(F, model.weights));
    double objective = logistic_objective(margins, model.weights, lambda);
    model.report.objective.push_back(objective);

    std::vector<double> curvature(n);
    Vector residual(static_cast<Eigen::Index>(n));
    double grad_norm = 0.0;
    for (int iter = 0;; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            // s = sigmoid(-margin)
            const double s = 1.0 / (1.0 + std::exp(margins(ii)));
            residual(ii) = -y(ii) * s * inv_n;
            curvature[i] = s * (1.0 - s) * inv_n;
        }
        const Vector grad = transpose_multiply(F, residual) + 2.0 * lambda * model.weights;
        grad_norm = grad.norm();
        model.report.iterations = iter;
        model.report.grad_norm = grad_norm;
        if (grad_norm < options.tol) break;
        if (iter >= options.max_iter) {
            throw ConvergenceError("logistic regression did not converge in " + std::to_string(options.max_iter) +
                                       " iterations",
                                   grad_norm);
        }

        Eigen::MatrixXd H = gram_of(F, curvature, threads);
        H.diagonal().array() += 2.0 * lambda;
        const Vector step = -solve_spd(std::move(H), grad);
        const double slope = grad.dot(step);

        // Backtracking (Armijo) keeps the objective monotone.
        double t = 1.0;
        Vector trial;
        Vector trial_margins;
        double trial_objective = objective;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            trial = model.weights + t * step;
            trial_margins = y.cwiseProduct(multiply(F, trial));
            trial_objective = logistic_objective(trial_margins, trial, lambda);
            if (trial_objective <= objective + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) throw ConvergenceError("line search failed", grad_norm);
        model.weights = std::move(trial);
        margins = std::move(trial_margins);
        objective = trial_objective;
        model.report.objective.push_back(objective);
    }
    model.report.solve_seconds = seconds_since(start);
    model.train_seconds = model.report.solve_seconds;
    model.nnz_F = nnz(F);
    return model;
}

Vector predict(const Model& model, const FeatureMatrix& Z) { return multiply(Z, model.weights); }

double test_error(Task task, const Vector& predictions, const Vector& y) {
    if (predictions.size() != y.size()) throw DimError("prediction and target lengths differ");
    if (y.size() == 0) return 0.0;
    if (task == Task::Regression) return (predictions - y).squaredNorm() / static_cast<double>(y.size());
    std::size_t wrong = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double label = predictions(i) >= 0.0 ? 1.0 : -1.0;
        if (label != y(i)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(y.size());
}

double test_error(const Model& model, const FeatureMatrix& Z, const Vector& y) {
    return test_error(model.task, predict(model, Z), y);
}

Model train(const FeatureMap& map, const Matrix& X, const Vector& y, Task task, double lambda, unsigned threads) {
    const auto start = Clock::now();
    const FeatureMatrix F = transform(map, X, threads);
    const double feature_seconds = seconds_since(start);
    Model model = task == Task::Regression ? ridge_fit(F, y, lambda, threads) : logistic_fit(F, y, lambda, {}, threads);
    model.feature_map = map;
    model.feature_seconds = feature_seconds;
    return model;
}

Vector predict_points(const Model& model, const Matrix& X, unsigned threads) {
    if (!model.feature_map) throw InvalidData("model carries no feature map");
    return predict(model, transform(*model.feature_map, X, threads));
}

}  // namespace eof
