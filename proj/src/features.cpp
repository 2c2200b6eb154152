#include "eof/features.hpp"

#include "eof/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace eof {

namespace {

// sinh(a) / sinh(b) for 0 <= a <= b. Direct ratio while sinh(b) is far from
// overflow, otherwise exp(a - b) * (1 - e^{-2a}) / (1 - e^{-2b}), which is the
// same quantity without forming either sinh.
double sinh_ratio(double a, double b) {
    constexpr double kDirectLimit = 20.0;
    if (b < kDirectLimit) return std::sinh(a) / std::sinh(b);
    return std::exp(a - b) * (std::expm1(-2.0 * a) / std::expm1(-2.0 * b));
}

void validate_1d(int level, std::int64_t pos) {
    if (level < 1 || level > KernelSpec::kMaxLevel) {
        throw InvalidLevel("level " + std::to_string(level) + " out of range");
    }
    const std::int64_t cells = std::int64_t{1} << level;
    if (pos < 1 || pos >= cells || pos % 2 == 0) {
        throw InvalidIndex("position " + std::to_string(pos) + " is not odd in [1, 2^" +
                           std::to_string(level) + ")");
    }
}

struct Stencil {
    std::array<double, 3> node;
    std::array<double, 3> weight;
};

Stencil stencil_1d(const KernelSpec& spec, int level, std::int64_t pos) {
    const double h = std::ldexp(1.0, -level);
    const double a = static_cast<double>(pos - 1) * h;
    const double b = static_cast<double>(pos) * h;
    const double c = static_cast<double>(pos + 1) * h;
    const double w_ab = wronskian(spec, a, b);
    const double w_bc = wronskian(spec, b, c);
    const double w_ac = wronskian(spec, a, c);
    return {{a, b, c}, {-1.0 / w_ab, w_ac / (w_ab * w_bc), -1.0 / w_bc}};
}

}  // namespace

int FeatureIndex::level_sum() const noexcept { return std::accumulate(level.begin(), level.end(), 0); }

std::size_t FeatureIndexHash::operator()(const FeatureIndex& idx) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (int l : idx.level) mix(static_cast<std::uint64_t>(l));
    for (std::int64_t i : idx.pos) mix(static_cast<std::uint64_t>(i));
    return static_cast<std::size_t>(h);
}

bool canonical_less(const FeatureIndex& a, const FeatureIndex& b) noexcept {
    const int sa = a.level_sum();
    const int sb = b.level_sum();
    if (sa != sb) return sa < sb;
    if (a.level != b.level) return a.level < b.level;
    return a.pos < b.pos;
}

void validate(const FeatureIndex& idx) {
    if (idx.level.size() != idx.pos.size()) throw DimError("level and position lengths differ");
    if (idx.level.empty()) throw DimError("feature index has dimension 0");
    for (std::size_t d = 0; d < idx.dim(); ++d) validate_1d(idx.level[d], idx.pos[d]);
}

double phi_1d(const KernelSpec& spec, int level, std::int64_t pos, double x) {
    validate_1d(level, pos);
    if (spec.kind() == KernelKind::Custom) return phi_1d_generic(spec, level, pos, x);
    x = spec.admit(x);
    const double h = std::ldexp(1.0, -level);
    const double lo = static_cast<double>(pos - 1) * h;
    const double center = static_cast<double>(pos) * h;
    const double hi = static_cast<double>(pos + 1) * h;
    if (x <= lo || x >= hi) return 0.0;
    const double u = x <= center ? x - lo : hi - x;
    if (spec.kind() == KernelKind::Laplace) return sinh_ratio(spec.omega() * u, spec.omega() * h);
    return u / h;
}

double phi_1d_generic(const KernelSpec& spec, int level, std::int64_t pos, double x) {
    validate_1d(level, pos);
    x = spec.admit(x);
    const double h = std::ldexp(1.0, -level);
    const double lo = static_cast<double>(pos - 1) * h;
    const double center = static_cast<double>(pos) * h;
    const double hi = static_cast<double>(pos + 1) * h;
    if (x <= lo || x >= hi) return 0.0;
    if (x <= center) return wronskian(spec, lo, x) / wronskian(spec, lo, center);
    return wronskian(spec, x, hi) / wronskian(spec, center, hi);
}

double phi_nd(const KernelSpec& spec, const FeatureIndex& idx, std::span<const double> x) {
    if (x.size() != idx.dim() || idx.dim() != static_cast<std::size_t>(spec.dim())) {
        throw DimError("point, index and kernel dimensions disagree");
    }
    double value = 1.0;
    for (std::size_t d = 0; d < idx.dim() && value != 0.0; ++d) {
        value *= phi_1d(spec, idx.level[d], idx.pos[d], x[d]);
    }
    return value;
}

Box support_box(const FeatureIndex& idx) {
    validate(idx);
    Box box(idx.dim());
    for (std::size_t d = 0; d < idx.dim(); ++d) {
        const double h = std::ldexp(1.0, -idx.level[d]);
        box[d] = {static_cast<double>(idx.pos[d] - 1) * h, static_cast<double>(idx.pos[d] + 1) * h};
    }
    return box;
}

double feature_norm_sq_1d(const KernelSpec& spec, int level, std::int64_t pos) {
    validate_1d(level, pos);
    return stencil_1d(spec, level, pos).weight[1];
}

double hierarchical_surplus(const KernelSpec& spec, const PointFunction& f, const FeatureIndex& idx) {
    validate(idx);
    const std::size_t dim = idx.dim();
    if (dim != static_cast<std::size_t>(spec.dim())) throw DimError("index and kernel dimensions disagree");

    std::vector<Stencil> stencils;
    stencils.reserve(dim);
    for (std::size_t d = 0; d < dim; ++d) stencils.push_back(stencil_1d(spec, idx.level[d], idx.pos[d]));

    std::vector<int> digit(dim, 0);
    std::vector<double> point(dim);
    double total = 0.0;
    while (true) {
        double weight = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            point[d] = stencils[d].node[static_cast<std::size_t>(digit[d])];
            weight *= stencils[d].weight[static_cast<std::size_t>(digit[d])];
        }
        total += weight * f(point);

        std::size_t d = 0;
        while (d < dim && ++digit[d] == 3) digit[d++] = 0;
        if (d == dim) break;
    }
    return total;
}

}  // namespace eof
