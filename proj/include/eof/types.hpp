#pragma once

#include <Eigen/Dense>

namespace eof {

// Row-major so that each sample is a contiguous span.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace eof
