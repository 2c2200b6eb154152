#include "eof/data.hpp"

#include "eof/error.hpp"
#include "eof/parallel.hpp"
#include "eof/simd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace eof {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last) throw ParseError("non-numeric cell '" + cell + "'", row, col);
    if (!std::isfinite(value)) throw ParseError("non-finite cell '" + cell + "'", row, col);
    return value;
}

Matrix take_rows(const Matrix& X, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = X.row(static_cast<Eigen::Index>(rows[k]));
    return out;
}

Vector take(const Vector& y, const std::vector<std::size_t>& rows) {
    Vector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Eigen::Index>(k)) = y(static_cast<Eigen::Index>(rows[k]));
    return out;
}

}  // namespace

Scaler Scaler::fit(const Matrix& X, const Vector& y, Task task) {
    if (X.rows() == 0) throw InvalidData("cannot fit scaling on an empty set");
    Scaler s;
    s.task = task;
    s.x_min = X.colwise().minCoeff().transpose();
    s.x_max = X.colwise().maxCoeff().transpose();
    if (task == Task::Regression) {
        s.y_min = y.minCoeff();
        s.y_max = y.maxCoeff();
        return s;
    }
    std::vector<double> labels(y.data(), y.data() + y.size());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.size() != 2) {
        throw InvalidData("classification needs exactly two labels, found " + std::to_string(labels.size()));
    }
    s.y_min = labels[0];
    s.y_max = labels[1];
    return s;
}

Matrix Scaler::transform_inputs(const Matrix& X) const {
    if (X.cols() != x_min.size()) throw DimError("data width does not match scaler");
    Matrix out(X.rows(), X.cols());
    for (Eigen::Index d = 0; d < X.cols(); ++d) {
        const double lo = x_min(d);
        const double span = x_max(d) - lo;
        for (Eigen::Index r = 0; r < X.rows(); ++r) {
            out(r, d) = span > 0.0 ? std::clamp((X(r, d) - lo) / span, 0.0, 1.0) : 0.5;
        }
    }
    return out;
}

Vector Scaler::transform_targets(const Vector& y) const {
    Vector out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (task == Task::Classification) {
            if (y(i) == y_max) {
                out(i) = 1.0;
            } else if (y(i) == y_min) {
                out(i) = -1.0;
            } else {
                throw InvalidData("unknown class label " + std::to_string(y(i)));
            }
        } else {
            const double span = y_max - y_min;
            out(i) = span > 0.0 ? 2.0 * (y(i) - y_min) / span - 1.0 : 0.0;
        }
    }
    return out;
}

Vector Scaler::inverse_targets(const Vector& y_scaled) const {
    Vector out(y_scaled.size());
    for (Eigen::Index i = 0; i < y_scaled.size(); ++i) {
        if (task == Task::Classification) {
            out(i) = y_scaled(i) >= 0.0 ? y_max : y_min;
        } else {
            out(i) = y_min + (y_scaled(i) + 1.0) * 0.5 * (y_max - y_min);
        }
    }
    return out;
}

Table load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header in " + path.string(), 0, 0);
    Table table;
    table.header = split_row(line);

    std::vector<double> values;
    std::size_t row = 0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != table.header.size()) {
            throw ParseError("expected " + std::to_string(table.header.size()) + " cells, found " +
                                 std::to_string(cells.size()),
                             row, cells.size());
        }
        for (std::size_t c = 0; c < cells.size(); ++c) values.push_back(parse_number(cells[c], row, c));
        ++count;
    }
    table.values = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(count),
                                            static_cast<Eigen::Index>(table.header.size()));
    return table;
}

RawDataset split_target(const Table& table, const std::string& target_column) {
    const auto& header = table.header;
    if (header.size() < 2) throw ParseError("need at least one feature and a target column", 0, 0);
    std::size_t target = header.size() - 1;
    if (!target_column.empty()) {
        const auto it = std::find(header.begin(), header.end(), target_column);
        if (it == header.end()) throw ParseError("no column named '" + target_column + "'", 0, 0);
        target = static_cast<std::size_t>(it - header.begin());
    }

    RawDataset raw;
    raw.target_name = header[target];
    const auto n = table.values.rows();
    raw.X.resize(n, static_cast<Eigen::Index>(header.size() - 1));
    raw.y = table.values.col(static_cast<Eigen::Index>(target));
    Eigen::Index out = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == target) continue;
        raw.feature_names.push_back(header[c]);
        raw.X.col(out++) = table.values.col(static_cast<Eigen::Index>(c));
    }
    return raw;
}

RawDataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
    return split_target(load_table(path), target_column);
}

void write_csv(const std::filesystem::path& path, const RawDataset& data) {
    std::ofstream out(path);
    if (!out) throw InvalidData("cannot write " + path.string());
    for (const auto& name : data.feature_names) out << name << ',';
    out << data.target_name << '\n';
    char buf[32];
    auto put = [&](double v) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, ptr - buf);
    };
    for (Eigen::Index r = 0; r < data.X.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.X.cols(); ++c) {
            put(data.X(r, c));
            out << ',';
        }
        put(data.y(r));
        out << '\n';
    }
}

Dataset standardize(const RawDataset& raw, Task task, double train_ratio, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(raw.X.rows());
    if (n < 2) throw InvalidData("need at least two rows to split");
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw InvalidData("train ratio must be in (0, 1)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n))), 1, n - 1);
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());

    RawDataset a{raw.feature_names, raw.target_name, take_rows(raw.X, train), take(raw.y, train)};
    RawDataset b{raw.feature_names, raw.target_name, take_rows(raw.X, test), take(raw.y, test)};
    return standardize(a, b, task);
}

Dataset standardize(const RawDataset& train, const RawDataset& test, Task task) {
    if (train.X.cols() != test.X.cols()) throw DimError("train and test widths differ");
    Dataset ds;
    ds.task = task;
    ds.scaler = Scaler::fit(train.X, train.y, task);
    ds.X_train = ds.scaler.transform_inputs(train.X);
    ds.y_train = ds.scaler.transform_targets(train.y);
    ds.X_test = ds.scaler.transform_inputs(test.X);
    ds.y_test = ds.scaler.transform_targets(test.y);
    return ds;
}

double estimate_sigma(const Matrix& X, std::size_t neighbour, unsigned threads) {
    const auto n = static_cast<std::size_t>(X.rows());
    if (n < 2) throw DegenerateData("need at least two points to estimate a bandwidth");
    const std::size_t k = std::min(neighbour, n - 1);
    const auto dim = static_cast<std::size_t>(X.cols());

    std::vector<double> kth(n);
    parallel_for(n, threads == 0 ? default_threads() : threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dist;
        dist.reserve(n - 1);
        for (std::size_t i = begin; i < end; ++i) {
            dist.clear();
            const std::span<const double> xi(X.row(static_cast<Eigen::Index>(i)).data(), dim);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                dist.push_back(simd::squared_distance(xi, std::span<const double>(X.row(static_cast<Eigen::Index>(j)).data(), dim)));
            }
            std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
            kth[i] = std::sqrt(dist[k - 1]);
        }
    });
    const double mean = std::accumulate(kth.begin(), kth.end(), 0.0) / static_cast<double>(n);
    if (!(mean > 0.0)) throw DegenerateData("all neighbour distances are zero");
    return 1.0 / mean;
}

}  // namespace eof
