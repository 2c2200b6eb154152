#include "eof/bench.hpp"
#include "eof/data.hpp"
#include "eof/design.hpp"
#include "eof/embed.hpp"
#include "eof/error.hpp"
#include "eof/kernels.hpp"
#include "eof/learn.hpp"
#include "eof/model_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct MapOptions {
    std::string kernel = "laplace";
    std::optional<double> omega;
    std::optional<int> level;
    std::optional<std::size_t> num_features;
    std::uint64_t seed = 7;
    bool raw_scale = false;
    bool strict = false;
    std::string method = "eof";
    std::size_t pool_factor = 10;
};

void add_design_flags(CLI::App* cmd, MapOptions& o) {
    cmd->add_option("--kernel", o.kernel, "laplace, sobolev or bb")
        ->check(CLI::IsMember({"laplace", "sobolev", "bb"}))
        ->capture_default_str();
    cmd->add_option("--omega", o.omega, "kernel parameter (default: estimated bandwidth, or 1 for embed)");
    auto* level = cmd->add_option("--level", o.level, "sparse grid level n");
    auto* m = cmd->add_option("--num-features", o.num_features, "number of features M");
    level->excludes(m);
    m->excludes(level);
    cmd->add_option("--seed", o.seed, "seed for truncation and random features")->capture_default_str();
    cmd->add_flag("--raw-scale", o.raw_scale, "emit unnormalized features");
    cmd->add_flag("--strict", o.strict, "reject points outside [0,1]^D");
}

eof::IndexSet build_design(int dim, const MapOptions& o) {
    if (o.level) return eof::enumerate_sparse_grid(dim, *o.level);
    if (o.num_features) return eof::design_for_size(dim, *o.num_features, o.seed);
    throw CLI::ValidationError("one of --level or --num-features is required");
}

eof::KernelSpec build_kernel(int dim, double omega, const MapOptions& o) {
    return eof::KernelSpec(eof::parse_kind(o.kernel), omega, dim,
                           o.strict ? eof::DomainPolicy::Strict : eof::DomainPolicy::Clamp);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_lambda(const std::string& s, std::size_t n) {
    if (s == "auto") return eof::default_lambda(n);
    return std::stod(s);
}

eof::Dataset prepare(const std::string& data, const std::string& test, const std::string& target, eof::Task task,
                     double split, std::uint64_t seed) {
    const auto raw = eof::load_csv(data, target);
    if (!test.empty()) return eof::standardize(raw, eof::load_csv(test, target), task);
    if (split > 0.0 && split < 1.0) return eof::standardize(raw, task, split, seed);
    return eof::standardize(raw, raw, task);
}

int run_embed(const MapOptions& o, const std::string& input, const std::string& output) {
    const auto table = eof::load_table(input);
    const int dim = static_cast<int>(table.values.cols());
    const auto spec = build_kernel(dim, o.omega.value_or(1.0), o);
    const auto design = build_design(dim, o);
    const auto F = eof::embed_batch(spec, design, table.values,
                                    o.raw_scale ? eof::FeatureScale::Raw : eof::FeatureScale::Normalized);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) throw eof::InvalidData("cannot write " + output);
    }
    std::ostream& out = output.empty() ? std::cout : file;
    out << "# " << F.rows << ' ' << F.cols << ' ' << F.nnz() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < F.rows; ++r) {
        for (std::size_t k = F.row_ptr[r]; k < F.row_ptr[r + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%zu,%u,%.17g\n", r, F.col_idx[k], F.values[k]);
            out << buf;
        }
    }
    return 0;
}

struct TrainOptions {
    std::string data, test, target, task = "reg", lambda = "auto", output;
    double split = 1.0;
};

int run_train(const MapOptions& o, const TrainOptions& t) {
    const auto task = eof::parse_task(t.task);
    const auto ds = prepare(t.data, t.test, t.target, task, t.split, o.seed);
    const double lambda = parse_lambda(t.lambda, static_cast<std::size_t>(ds.X_train.rows()));
    const double omega = o.omega ? *o.omega : eof::estimate_sigma(ds.X_train);
    const int dim = ds.dim();

    const eof::FeatureMap map = [&]() -> eof::FeatureMap {
        if (o.method == "eof") {
            return eof::EofFeatureMap{build_kernel(dim, omega, o), build_design(dim, o),
                                      o.raw_scale ? eof::FeatureScale::Raw : eof::FeatureScale::Normalized};
        }
        if (!o.level && !o.num_features) throw CLI::ValidationError("one of --level or --num-features is required");
        const std::size_t M = o.num_features ? *o.num_features : eof::sparse_grid_size(dim, *o.level);
        return eof::make_map(eof::parse_method(o.method), ds, M, omega, o.pool_factor, o.seed);
    }();

    const auto model = eof::train(map, ds.X_train, ds.y_train, task, lambda);
    std::printf("method=%s M=%zu lambda=%.6g omega=%.6g nnz(F)=%zu T_features=%.4fs T_solve=%.4fs\n",
                o.method.c_str(), eof::output_dim(map), lambda, omega, model.nnz_F, model.feature_seconds,
                model.train_seconds);
    std::printf("train_error=%.6g\n", eof::test_error(task, eof::predict_points(model, ds.X_train), ds.y_train));
    if (!t.test.empty() || (t.split > 0.0 && t.split < 1.0)) {
        std::printf("test_error=%.6g\n", eof::test_error(task, eof::predict_points(model, ds.X_test), ds.y_test));
    }
    if (!t.output.empty()) eof::save_model(t.output, eof::SavedModel{model, ds.scaler});
    return 0;
}

int run_predict(const std::string& model_path, const std::string& input, const std::string& output,
                const std::string& target) {
    const auto saved = eof::load_model(model_path);
    const auto table = eof::load_table(input);
    eof::Matrix X;
    std::optional<eof::Vector> y;
    if (target.empty()) {
        X = table.values;
    } else {
        auto raw = eof::split_target(table, target);
        X = std::move(raw.X);
        y = std::move(raw.y);
    }
    if (saved.scaler) X = saved.scaler->transform_inputs(X);
    const eof::Vector scaled = eof::predict_points(saved.model, X);
    const eof::Vector pred = saved.scaler ? saved.scaler->inverse_targets(scaled) : scaled;

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) throw eof::InvalidData("cannot write " + output);
    }
    std::ostream& out = output.empty() ? std::cout : file;
    out << "prediction\n";
    char buf[64];
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", pred(i));
        out << buf;
    }
    if (y) {
        const eof::Vector y_scaled = saved.scaler ? saved.scaler->transform_targets(*y) : *y;
        std::fprintf(stderr, "test_error=%.6g\n", eof::test_error(saved.model.task, scaled, y_scaled));
    }
    return 0;
}

struct BenchOptions {
    std::string data, test, target, task = "reg", methods = "eof,rks,orf,lkrf,eerf", m = "20,40,80,160";
    std::string out = "results", lambda = "auto";
    int runs = 50;
    std::uint64_t seed = 7;
    double split = 0.8;
    std::size_t pool_factor = 10;
    std::optional<double> sigma;
    bool no_timing = false;
};

int run_bench(const BenchOptions& b) {
    const auto task = eof::parse_task(b.task);
    const auto ds = prepare(b.data, b.test, b.target, task, b.split, b.seed);

    eof::BenchConfig cfg;
    cfg.methods.clear();
    for (const auto& m : split_list(b.methods)) cfg.methods.push_back(eof::parse_method(m));
    for (const auto& m : split_list(b.m)) cfg.m_grid.push_back(static_cast<std::size_t>(std::stoull(m)));
    cfg.runs = b.runs;
    cfg.seed = b.seed;
    cfg.pool_factor = b.pool_factor;
    cfg.sigma = b.sigma;
    if (b.lambda != "auto") cfg.lambda = std::stod(b.lambda);

    const auto results = eof::run_benchmark(ds, cfg);
    eof::write_reports(results, b.out, !b.no_timing);
    std::cout << eof::report(results, eof::ReportFormat::Table, !b.no_timing);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-optimal sparse kernel features and random-feature baselines"};
    app.require_subcommand(1);

    MapOptions embed_opts;
    std::string embed_in, embed_out;
    auto* embed = app.add_subcommand("embed", "embed points into the sparse feature space");
    add_design_flags(embed, embed_opts);
    embed->add_option("--input", embed_in, "CSV of points with a header row")->required();
    embed->add_option("--output", embed_out, "coordinate-format output (default: stdout)");

    MapOptions train_map;
    TrainOptions train_opts;
    auto* train = app.add_subcommand("train", "fit a ridge or logistic model");
    add_design_flags(train, train_map);
    train->add_option("--method", train_map.method, "eof, rks, orf, lkrf or eerf")
        ->check(CLI::IsMember({"eof", "rks", "orf", "lkrf", "eerf"}))
        ->capture_default_str();
    train->add_option("--pool-factor", train_map.pool_factor, "pool size multiple for lkrf/eerf")
        ->capture_default_str();
    train->add_option("--data", train_opts.data, "training CSV")->required();
    train->add_option("--test", train_opts.test, "test CSV");
    train->add_option("--split", train_opts.split, "train fraction when no test CSV is given");
    train->add_option("--target", train_opts.target, "target column (default: last)");
    train->add_option("--task", train_opts.task)->check(CLI::IsMember({"reg", "clf"}))->capture_default_str();
    train->add_option("--lambda", train_opts.lambda, "regularization or 'auto'")->capture_default_str();
    train->add_option("--output", train_opts.output, "model file");

    std::string model_path, pred_in, pred_out, pred_target;
    auto* predict = app.add_subcommand("predict", "apply a saved model");
    predict->add_option("--model", model_path)->required();
    predict->add_option("--input", pred_in, "CSV of points with a header row")->required();
    predict->add_option("--output", pred_out, "prediction CSV (default: stdout)");
    predict->add_option("--target", pred_target, "target column to score against");

    BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "compare methods over a grid of feature counts");
    bench->add_option("--data", bench_opts.data, "dataset CSV")->required();
    bench->add_option("--test", bench_opts.test, "separate test CSV");
    bench->add_option("--split", bench_opts.split, "train fraction")->capture_default_str();
    bench->add_option("--target", bench_opts.target, "target column (default: last)");
    bench->add_option("--task", bench_opts.task)->check(CLI::IsMember({"reg", "clf"}))->capture_default_str();
    bench->add_option("--methods", bench_opts.methods)->capture_default_str();
    bench->add_option("--m", bench_opts.m, "comma-separated feature counts")->capture_default_str();
    bench->add_option("--runs", bench_opts.runs)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--seed", bench_opts.seed)->capture_default_str();
    bench->add_option("--pool-factor", bench_opts.pool_factor)->capture_default_str();
    bench->add_option("--lambda", bench_opts.lambda)->capture_default_str();
    bench->add_option("--sigma", bench_opts.sigma, "bandwidth (default: 50th-neighbour estimate)");
    bench->add_option("--out", bench_opts.out, "output directory")->capture_default_str();
    bench->add_flag("--no-timing", bench_opts.no_timing, "omit timing columns");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*embed) return run_embed(embed_opts, embed_in, embed_out);
        if (*train) return run_train(train_map, train_opts);
        if (*predict) return run_predict(model_path, pred_in, pred_out, pred_target);
        if (*bench) return run_bench(bench_opts);
    } catch (const eof::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
