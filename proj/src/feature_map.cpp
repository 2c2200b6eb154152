#include "eof/feature_map.hpp"

namespace eof {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::size_t output_dim(const FeatureMap& map) {
    return std::visit(overloaded{[](const EofFeatureMap& m) { return m.design.size(); },
                                 [](const RandomFeatureMap& m) { return m.size(); }},
                      map);
}

std::string_view map_name(const FeatureMap& map) {
    return std::visit(overloaded{[](const EofFeatureMap&) { return std::string_view("eof"); },
                                 [](const RandomFeatureMap& m) { return method_name(m.method); }},
                      map);
}

FeatureMatrix transform(const FeatureMap& map, const Matrix& X, unsigned threads) {
    return std::visit(overloaded{[&](const EofFeatureMap& m) -> FeatureMatrix {
                                     return embed_batch(m.kernel, m.design, X, m.scale, threads);
                                 },
                                 [&](const RandomFeatureMap& m) -> FeatureMatrix {
                                     return rf_embed_batch(m, X, threads);
                                 }},
                      map);
}

std::size_t rows(const FeatureMatrix& F) {
    return std::visit(overloaded{[](const SparseMat& m) { return m.rows; },
                                 [](const Matrix& m) { return static_cast<std::size_t>(m.rows()); }},
                      F);
}

std::size_t cols(const FeatureMatrix& F) {
    return std::visit(overloaded{[](const SparseMat& m) { return m.cols; },
                                 [](const Matrix& m) { return static_cast<std::size_t>(m.cols()); }},
                      F);
}

std::size_t nnz(const FeatureMatrix& F) {
    return std::visit(overloaded{[](const SparseMat& m) { return m.nnz(); },
                                 [](const Matrix& m) {
                                     return static_cast<std::size_t>((m.array() != 0.0).count());
                                 }},
                      F);
}

}  // namespace eof
