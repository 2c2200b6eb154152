#pragma once

// Sturm-Liouville product kernels
//
//     k(x, x') = prod_d p(min(x_d, x'_d)) * q(max(x_d, x'_d))
//
// on the unit cube, where p and q solve the homogeneous Sturm-Liouville
// equation with the left and right boundary conditions respectively. Three
// families ship with closed forms:
//
//   Laplace          p(x) = exp(w x),  q(x) = exp(-w x)   k = exp(-w |x - x'|_1)
//   WeightedSobolev  p(x) = w x + 1,   q(x) = 1           k = prod (w min + 1)
//   BrownianBridge   p(x) = x,         q(x) = 1 - x       k = prod min (1 - max)
//
// Other kernels can be plugged in through SturmLiouvilleFactors.

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace eof {

enum class KernelKind { Laplace, WeightedSobolev, BrownianBridge, Custom };

// What to do with a coordinate outside [0, 1].
enum class DomainPolicy { Clamp, Strict };

// Caller-supplied factors for a kernel outside the built-in families.
// level_constant(l) must return ||phi_{l,i}||_k^{-2} for the 1-D feature at
// level l; it is assumed independent of the position i.
struct SturmLiouvilleFactors {
    std::function<double(double)> p;
    std::function<double(double)> q;
    std::function<double(int)> level_constant;
};

class KernelSpec {
public:
    // Deepest supported level per dimension; 2^30 cells keeps every grid
    // node exactly representable.
    static constexpr int kMaxLevel = 30;

    KernelSpec(KernelKind kind, double omega, int dim, DomainPolicy policy = DomainPolicy::Clamp);

    static KernelSpec laplace(double omega, int dim);
    static KernelSpec weighted_sobolev(double omega, int dim);
    static KernelSpec brownian_bridge(int dim);
    static KernelSpec custom(SturmLiouvilleFactors factors, int dim);

    [[nodiscard]] KernelKind kind() const noexcept { return kind_; }
    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] DomainPolicy policy() const noexcept { return policy_; }
    [[nodiscard]] KernelSpec with_policy(DomainPolicy policy) const;

    [[nodiscard]] double p(double x) const;
    [[nodiscard]] double q(double x) const;

    // 1-D normalization constant C_l = ||phi_{l,i}||_k^{-2}. Throws InvalidLevel.
    [[nodiscard]] double level_constant(int level) const;

    // Applies the domain policy to one coordinate. Throws InvalidPoint on
    // NaN/Inf, or on out-of-range values under DomainPolicy::Strict.
    [[nodiscard]] double admit(double x) const;

private:
    KernelKind kind_;
    double omega_;
    int dim_;
    DomainPolicy policy_;
    std::shared_ptr<const SturmLiouvilleFactors> custom_;
    std::vector<double> level_constants_;  // indexed by level, [0] unused
};

[[nodiscard]] double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                                 std::span<const double> xp);

// prod_d C_{l_d}. Throws InvalidLevel for any level < 1.
[[nodiscard]] double norm_const(const KernelSpec& spec, std::span<const int> levels);

// W(s, t) = p(t) q(s) - p(s) q(t); positive for s < t on the built-in families.
[[nodiscard]] double wronskian(const KernelSpec& spec, double s, double t);

[[nodiscard]] std::string_view kind_name(KernelKind kind) noexcept;

// Accepts "laplace", "sobolev" and "bb". Throws std::invalid_argument.
[[nodiscard]] KernelKind parse_kind(std::string_view name);

}  // namespace eof
