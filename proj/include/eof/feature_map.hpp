#pragma once

#include "eof/baselines.hpp"
#include "eof/design.hpp"
#include "eof/embed.hpp"
#include "eof/kernels.hpp"
#include "eof/types.hpp"

#include <cstddef>
#include <string_view>
#include <variant>

namespace eof {

struct EofFeatureMap {
    KernelSpec kernel;
    IndexSet design;
    FeatureScale scale = FeatureScale::Normalized;
};

using FeatureMap = std::variant<EofFeatureMap, RandomFeatureMap>;

// EOF maps produce sparse rows; random-feature maps produce dense ones.
using FeatureMatrix = std::variant<SparseMat, Matrix>;

[[nodiscard]] std::size_t output_dim(const FeatureMap& map);
[[nodiscard]] std::string_view map_name(const FeatureMap& map);
[[nodiscard]] FeatureMatrix transform(const FeatureMap& map, const Matrix& X, unsigned threads = 0);

[[nodiscard]] std::size_t rows(const FeatureMatrix& F);
[[nodiscard]] std::size_t cols(const FeatureMatrix& F);
// Stored nonzeros; exact zeros in a dense matrix are not counted.
[[nodiscard]] std::size_t nnz(const FeatureMatrix& F);

}  // namespace eof
