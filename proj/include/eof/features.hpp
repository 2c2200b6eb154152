#pragma once

// Hierarchical features with compact, nested supports.
//
// A 1-D feature phi_{l,i} lives on [(i-1) 2^-l, (i+1) 2^-l] for odd i,
// equals 1 at the node z_{l,i} = i 2^-l and solves the homogeneous
// Sturm-Liouville equation on each half of its support. D-dimensional
// features are tensor products. Within one level the supports are disjoint;
// across levels they are either disjoint or nested, and the features are
// mutually orthogonal in the kernel's RKHS.

#include "eof/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace eof {

// Multilevel index (l, i): levels l_d >= 1 and odd positions 1 <= i_d < 2^l_d.
struct FeatureIndex {
    std::vector<int> level;
    std::vector<std::int64_t> pos;

    [[nodiscard]] std::size_t dim() const noexcept { return level.size(); }
    [[nodiscard]] int level_sum() const noexcept;

    friend bool operator==(const FeatureIndex&, const FeatureIndex&) = default;
};

struct FeatureIndexHash {
    std::size_t operator()(const FeatureIndex& idx) const noexcept;
};

// Canonical column order: by |l|, then l lexicographically, then i.
[[nodiscard]] bool canonical_less(const FeatureIndex& a, const FeatureIndex& b) noexcept;

// Throws InvalidLevel, InvalidIndex or DimError.
void validate(const FeatureIndex& idx);

struct Interval {
    double lo;
    double hi;
    friend bool operator==(const Interval&, const Interval&) = default;
};
using Box = std::vector<Interval>;

// Closed-form feature value. The shared node x = z_{l,i} takes the left
// branch; both branches equal 1 there.
[[nodiscard]] double phi_1d(const KernelSpec& spec, int level, std::int64_t pos, double x);

// Same feature through the generic p/q quotient, valid for any kernel.
[[nodiscard]] double phi_1d_generic(const KernelSpec& spec, int level, std::int64_t pos, double x);

[[nodiscard]] double phi_nd(const KernelSpec& spec, const FeatureIndex& idx, std::span<const double> x);

[[nodiscard]] Box support_box(const FeatureIndex& idx);

// ||phi_{l,i}||_k^2 from p and q alone:
//   W(z_{i-1}, z_{i+1}) / (W(z_{i-1}, z_i) W(z_i, z_{i+1}))
[[nodiscard]] double feature_norm_sq_1d(const KernelSpec& spec, int level, std::int64_t pos);

using PointFunction = std::function<double(std::span<const double>)>;

// <f, phi_idx>_k from the 3^D point values of f on the feature's stencil,
// via the tensor product of the 1-D operators
//   Delta f = a f(z_i) - f(z_{i-1}) / W(z_{i-1}, z_i) - f(z_{i+1}) / W(z_i, z_{i+1}),
//   a = W(z_{i-1}, z_{i+1}) / (W(z_{i-1}, z_i) W(z_i, z_{i+1})).
// Exact for f in the RKHS: phi_idx is the combination of kernel sections at
// the stencil nodes with exactly these weights.
[[nodiscard]] double hierarchical_surplus(const KernelSpec& spec, const PointFunction& f,
                                          const FeatureIndex& idx);

}  // namespace eof
