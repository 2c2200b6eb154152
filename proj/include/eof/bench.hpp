#pragma once

#include "eof/data.hpp"
#include "eof/learn.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eof {

enum class Method { Eof, Rks, Orf, Lkrf, Eerf };

[[nodiscard]] std::string_view method_label(Method method) noexcept;
// Accepts "eof", "rks", "orf", "lkrf", "eerf". Throws std::invalid_argument.
[[nodiscard]] Method parse_method(std::string_view name);

struct BenchConfig {
    std::vector<Method> methods{Method::Eof, Method::Rks, Method::Orf, Method::Lkrf, Method::Eerf};
    std::vector<std::size_t> m_grid;
    int runs = 50;
    std::uint64_t seed = 7;
    std::size_t pool_factor = 10;
    std::optional<double> lambda;  // default N^{-1/2}
    std::optional<double> sigma;   // default estimate_sigma(X_train)
    unsigned threads = 0;
};

struct BenchResult {
    std::string method;
    std::size_t M = 0;
    std::size_t M0 = 0;  // |S*_n| for EOF, pool size for LKRF / EERF, 0 otherwise
    double mean_error = 0.0;
    double std_error = 0.0;
    double T_train = 0.0;     // mean of T_features + T_solve
    double T_features = 0.0;  // mean feature construction time
    double T_solve = 0.0;     // mean Gram + solve time
    std::size_t nnz_F = 0;    // training feature matrix, first successful run
    std::vector<std::uint64_t> seeds;
    std::vector<double> errors;  // per successful run, in seed order
    int runs_ok = 0;
    int runs_failed = 0;
};

// Seed of run r, identical for every method and M.
[[nodiscard]] std::uint64_t run_seed(std::uint64_t master, int run) noexcept;

// Builds the feature map used by one benchmark run.
[[nodiscard]] FeatureMap make_map(Method method, const Dataset& data, std::size_t num_features, double sigma,
                                  std::size_t pool_factor, std::uint64_t seed);

[[nodiscard]] std::vector<BenchResult> run_benchmark(const Dataset& data, const BenchConfig& config);

enum class ReportFormat { Csv, Table, Curves };

[[nodiscard]] std::string report(const std::vector<BenchResult>& results, ReportFormat format,
                                 bool include_timing = true);

// Writes results.csv, table.txt and curves.csv into `dir`.
void write_reports(const std::vector<BenchResult>& results, const std::filesystem::path& dir,
                   bool include_timing = true);

}  // namespace eof
