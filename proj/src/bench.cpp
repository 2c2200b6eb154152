#include "eof/bench.hpp"

#include "eof/design.hpp"
#include "eof/error.hpp"
#include "eof/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace eof {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct RunOutcome {
    bool ok = false;
    double error = 0.0;
    double t_features = 0.0;
    double t_solve = 0.0;
    std::size_t nnz = 0;
    std::size_t m0 = 0;
};

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left) {
    if (s.size() >= width) return s;
    return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string_view method_label(Method method) noexcept {
    switch (method) {
        case Method::Eof: return "EOF";
        case Method::Rks: return "RKS";
        case Method::Orf: return "ORF";
        case Method::Lkrf: return "LKRF";
        case Method::Eerf: return "EERF";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "eof") return Method::Eof;
    if (name == "rks") return Method::Rks;
    if (name == "orf") return Method::Orf;
    if (name == "lkrf") return Method::Lkrf;
    if (name == "eerf") return Method::Eerf;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::uint64_t run_seed(std::uint64_t master, int run) noexcept {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(run)));
}

FeatureMap make_map(Method method, const Dataset& data, std::size_t num_features, double sigma,
                    std::size_t pool_factor, std::uint64_t seed) {
    const int dim = data.dim();
    switch (method) {
        case Method::Eof:
            return EofFeatureMap{KernelSpec::laplace(sigma, dim), design_for_size(dim, num_features, seed),
                                 FeatureScale::Normalized};
        case Method::Rks: return rks_map(dim, num_features, sigma, seed);
        case Method::Orf: return orf_map(dim, num_features, sigma, seed);
        case Method::Lkrf:
        case Method::Eerf: {
            const auto pool = rks_map(dim, pool_factor * num_features, sigma, seed);
            return method == Method::Lkrf ? lkrf_select(pool, data.X_train, data.y_train, num_features)
                                          : eerf_select(pool, data.X_train, data.y_train, num_features);
        }
    }
    throw std::invalid_argument("unknown method");
}

std::vector<BenchResult> run_benchmark(const Dataset& data, const BenchConfig& config) {
    if (config.runs < 1) throw InvalidData("runs must be at least 1");
    if (config.pool_factor < 1) throw InvalidData("pool factor must be at least 1");
    const double sigma = config.sigma ? *config.sigma : estimate_sigma(data.X_train, 50, config.threads);
    const double lambda =
        config.lambda ? *config.lambda : default_lambda(static_cast<std::size_t>(data.X_train.rows()));

    const std::size_t cells = config.methods.size() * config.m_grid.size();
    const auto runs = static_cast<std::size_t>(config.runs);
    std::vector<RunOutcome> outcomes(cells * runs);

    parallel_for(outcomes.size(), config.threads == 0 ? default_threads() : config.threads,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t job = begin; job < end; ++job) {
                         const std::size_t cell = job / runs;
                         const Method method = config.methods[cell / config.m_grid.size()];
                         const std::size_t M = config.m_grid[cell % config.m_grid.size()];
                         const std::uint64_t seed = run_seed(config.seed, static_cast<int>(job % runs));
                         RunOutcome& out = outcomes[job];
                         try {
                             const auto start = std::chrono::steady_clock::now();
                             const FeatureMap map = make_map(method, data, M, sigma, config.pool_factor, seed);
                             const double t_map =
                                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                             const Model model = train(map, data.X_train, data.y_train, data.task, lambda, 1);
                             const Vector pred = predict_points(model, data.X_test, 1);
                             out.error = test_error(data.task, pred, data.y_test);
                             out.t_features = t_map + model.feature_seconds;
                             out.t_solve = model.train_seconds;
                             out.nnz = model.nnz_F;
                             if (method == Method::Eof) {
                                 out.m0 = sparse_grid_size(data.dim(), level_for_size(data.dim(), M));
                             } else if (const auto* rf = std::get_if<RandomFeatureMap>(&map)) {
                                 out.m0 = rf->pool_size;
                             }
                             out.ok = std::isfinite(out.error);
                         } catch (const Error&) {
                             out.ok = false;
                         }
                     }
                 });

    std::vector<BenchResult> results;
    results.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        BenchResult r;
        r.method = std::string(method_label(config.methods[cell / config.m_grid.size()]));
        r.M = config.m_grid[cell % config.m_grid.size()];
        for (std::size_t run = 0; run < runs; ++run) {
            const RunOutcome& out = outcomes[cell * runs + run];
            const auto seed = run_seed(config.seed, static_cast<int>(run));
            if (!out.ok) {
                ++r.runs_failed;
                continue;
            }
            if (r.runs_ok == 0) {
                r.M0 = out.m0;
                r.nnz_F = out.nnz;
            }
            ++r.runs_ok;
            r.seeds.push_back(seed);
            r.errors.push_back(out.error);
            r.T_features += out.t_features;
            r.T_solve += out.t_solve;
        }
        if (r.runs_ok > 0) {
            const double n = r.runs_ok;
            // Shifted by the first error so identical runs give exactly zero spread.
            const double shift = r.errors.front();
            double mean_dev = 0.0;
            for (double e : r.errors) mean_dev += e - shift;
            mean_dev /= n;
            double ss = 0.0;
            for (double e : r.errors) ss += (e - shift - mean_dev) * (e - shift - mean_dev);
            r.mean_error = shift + mean_dev;
            r.std_error = std::sqrt(ss / n);
            r.T_features /= n;
            r.T_solve /= n;
            r.T_train = r.T_features + r.T_solve;
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string report(const std::vector<BenchResult>& results, ReportFormat fmt, bool include_timing) {
    std::string out;
    if (fmt == ReportFormat::Curves) {
        out = "method,M,mean_error,std_error\n";
        for (const auto& r : results) {
            out += r.method + ',' + std::to_string(r.M) + ',' + format("%.10g", r.mean_error) + ',' +
                   format("%.10g", r.std_error) + '\n';
        }
        return out;
    }

    std::vector<std::string> header{"Method", "M", "M0"};
    if (include_timing) header.emplace_back("T_train");
    header.emplace_back("nnz(F)");
    header.emplace_back("mean_error");
    header.emplace_back("std_error");
    if (fmt == ReportFormat::Csv) {
        if (include_timing) {
            header.emplace_back("T_features");
            header.emplace_back("T_solve");
        }
        header.emplace_back("runs_ok");
        header.emplace_back("runs_failed");
    }

    std::vector<std::vector<std::string>> rows{header};
    for (const auto& r : results) {
        std::vector<std::string> row{r.method, std::to_string(r.M), std::to_string(r.M0)};
        if (include_timing) row.push_back(format("%.6f", r.T_train));
        row.push_back(std::to_string(r.nnz_F));
        row.push_back(format("%.10g", r.mean_error));
        row.push_back(format("%.10g", r.std_error));
        if (fmt == ReportFormat::Csv) {
            if (include_timing) {
                row.push_back(format("%.6f", r.T_features));
                row.push_back(format("%.6f", r.T_solve));
            }
            row.push_back(std::to_string(r.runs_ok));
            row.push_back(std::to_string(r.runs_failed));
        }
        rows.push_back(std::move(row));
    }

    if (fmt == ReportFormat::Csv) {
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
            out += '\n';
        }
        return out;
    }

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            line += pad(row[c], width[c], c == 0);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

void write_reports(const std::vector<BenchResult>& results, const std::filesystem::path& dir, bool include_timing) {
    std::filesystem::create_directories(dir);
    const std::pair<const char*, ReportFormat> files[] = {
        {"results.csv", ReportFormat::Csv}, {"table.txt", ReportFormat::Table}, {"curves.csv", ReportFormat::Curves}};
    for (const auto& [name, fmt] : files) {
        std::ofstream out(dir / name);
        if (!out) throw InvalidData("cannot write " + (dir / name).string());
        out << report(results, fmt, include_timing);
    }
}

}  // namespace eof
