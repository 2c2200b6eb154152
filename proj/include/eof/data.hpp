#pragma once

#include "eof/learn.hpp"
#include "eof/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace eof {

struct RawDataset {
    std::vector<std::string> feature_names;
    std::string target_name;
    Matrix X;
    Vector y;
};

// Min-max scaling fitted on training data. Inputs map to [0, 1]; regression
// targets map to [-1, 1]; class labels map to -1 (smaller) and +1 (larger).
struct Scaler {
    Vector x_min;
    Vector x_max;
    Task task = Task::Regression;
    double y_min = 0.0;  // regression range, or the two class labels
    double y_max = 0.0;

    [[nodiscard]] static Scaler fit(const Matrix& X, const Vector& y, Task task);

    // Constant features map to 0.5; values outside the fitted range are clamped.
    [[nodiscard]] Matrix transform_inputs(const Matrix& X) const;
    [[nodiscard]] Vector transform_targets(const Vector& y) const;
    [[nodiscard]] Vector inverse_targets(const Vector& y_scaled) const;
};

struct Dataset {
    std::string name;
    Matrix X_train;
    Vector y_train;
    Matrix X_test;
    Vector y_test;
    Task task = Task::Regression;
    Scaler scaler;

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(X_train.cols()); }
};

struct Table {
    std::vector<std::string> header;
    Matrix values;
};

// Reads a rectangular numeric CSV with a header row. Throws ParseError with
// the offending row/column.
[[nodiscard]] Table load_table(const std::filesystem::path& path);

// Splits a table into inputs and target. An empty target name selects the
// last column.
[[nodiscard]] RawDataset split_target(const Table& table, const std::string& target_column = {});

// load_table followed by split_target. Throws ParseError with the offending row/column.
[[nodiscard]] RawDataset load_csv(const std::filesystem::path& path, const std::string& target_column = {});

void write_csv(const std::filesystem::path& path, const RawDataset& data);

// Random train/test split (train fraction `train_ratio`, at least one row on
// each side) followed by scaling fitted on the training rows only.
[[nodiscard]] Dataset standardize(const RawDataset& raw, Task task, double train_ratio, std::uint64_t seed);

// Pre-split variant: scaling fitted on `train`, applied to `test`.
[[nodiscard]] Dataset standardize(const RawDataset& train, const RawDataset& test, Task task);

// sigma = 1 / mean_i dist(x_i, k-th nearest neighbour), k = min(50, N - 1).
// Throws DegenerateData when the mean distance is zero.
[[nodiscard]] double estimate_sigma(const Matrix& X, std::size_t neighbour = 50, unsigned threads = 0);

}  // namespace eof
