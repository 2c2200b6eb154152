#include "eof/kernels.hpp"

#include "eof/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eof {

namespace {

double builtin_level_constant(KernelKind kind, double omega, int level) {
    const double h = std::ldexp(1.0, -level);
    switch (kind) {
        case KernelKind::Laplace:
            // ||phi||^2 = coth(w h): (1/2w) * integral of (phi'^2 + w^2 phi^2)
            // over the two branches, each contributing w coth(w h).
            return std::tanh(omega * h);
        case KernelKind::BrownianBridge:
            return 0.5 * h;
        case KernelKind::WeightedSobolev: {
            // ||f||^2 = f(0)^2 + (1/w) * integral f'^2, and the hat vanishes at 0.
            // Two linear pieces of width h with slope magnitude 1/h.
            const double slope = 1.0 / h;
            const double energy = 2.0 * slope * slope * h;
            return omega / energy;
        }
        case KernelKind::Custom: break;
    }
    return 0.0;
}

}  // namespace

KernelSpec::KernelSpec(KernelKind kind, double omega, int dim, DomainPolicy policy)
    : kind_(kind), omega_(omega), dim_(dim), policy_(policy) {
    if (dim < 1) throw std::invalid_argument("kernel dimension must be >= 1");
    if (kind == KernelKind::Custom) {
        throw std::invalid_argument("use KernelSpec::custom for user-supplied factors");
    }
    const bool needs_omega = kind != KernelKind::BrownianBridge;
    if (needs_omega && !(omega > 0.0 && std::isfinite(omega))) {
        throw std::invalid_argument("omega must be positive and finite");
    }
    level_constants_.assign(kMaxLevel + 1, 0.0);
    for (int l = 1; l <= kMaxLevel; ++l) level_constants_[l] = builtin_level_constant(kind, omega, l);
}

KernelSpec KernelSpec::laplace(double omega, int dim) { return {KernelKind::Laplace, omega, dim}; }

KernelSpec KernelSpec::weighted_sobolev(double omega, int dim) {
    return {KernelKind::WeightedSobolev, omega, dim};
}

KernelSpec KernelSpec::brownian_bridge(int dim) { return {KernelKind::BrownianBridge, 1.0, dim}; }

KernelSpec KernelSpec::custom(SturmLiouvilleFactors factors, int dim) {
    if (!factors.p || !factors.q || !factors.level_constant) {
        throw std::invalid_argument("custom kernel needs p, q and level_constant");
    }
    KernelSpec spec(KernelKind::BrownianBridge, 1.0, dim);
    spec.kind_ = KernelKind::Custom;
    spec.omega_ = 0.0;
    for (int l = 1; l <= kMaxLevel; ++l) {
        const double c = factors.level_constant(l);
        if (!(c > 0.0 && std::isfinite(c))) {
            throw std::invalid_argument("level_constant must be positive and finite");
        }
        spec.level_constants_[l] = c;
    }
    spec.custom_ = std::make_shared<const SturmLiouvilleFactors>(std::move(factors));
    return spec;
}

KernelSpec KernelSpec::with_policy(DomainPolicy policy) const {
    KernelSpec copy = *this;
    copy.policy_ = policy;
    return copy;
}

double KernelSpec::p(double x) const {
    switch (kind_) {
        case KernelKind::Laplace: return std::exp(omega_ * x);
        case KernelKind::WeightedSobolev: return omega_ * x + 1.0;
        case KernelKind::BrownianBridge: return x;
        case KernelKind::Custom: return custom_->p(x);
    }
    return 0.0;
}

double KernelSpec::q(double x) const {
    switch (kind_) {
        case KernelKind::Laplace: return std::exp(-omega_ * x);
        case KernelKind::WeightedSobolev: return 1.0;
        case KernelKind::BrownianBridge: return 1.0 - x;
        case KernelKind::Custom: return custom_->q(x);
    }
    return 0.0;
}

double KernelSpec::level_constant(int level) const {
    if (level < 1 || level > kMaxLevel) {
        throw InvalidLevel("level " + std::to_string(level) + " outside [1, " +
                           std::to_string(kMaxLevel) + "]");
    }
    return level_constants_[static_cast<std::size_t>(level)];
}

double KernelSpec::admit(double x) const {
    if (!std::isfinite(x)) throw InvalidPoint("non-finite coordinate");
    if (x >= 0.0 && x <= 1.0) return x;
    if (policy_ == DomainPolicy::Strict) {
        throw InvalidPoint("coordinate " + std::to_string(x) + " outside [0, 1]");
    }
    return std::clamp(x, 0.0, 1.0);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> xp) {
    const auto dim = static_cast<std::size_t>(spec.dim());
    if (x.size() != dim || xp.size() != dim) throw DimError("point dimension does not match kernel");

    if (spec.kind() == KernelKind::Laplace) {
        double l1 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) l1 += std::abs(spec.admit(x[d]) - spec.admit(xp[d]));
        return std::exp(-spec.omega() * l1);
    }
    double value = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
        const double a = spec.admit(x[d]);
        const double b = spec.admit(xp[d]);
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        switch (spec.kind()) {
            case KernelKind::WeightedSobolev: value *= spec.omega() * lo + 1.0; break;
            case KernelKind::BrownianBridge: value *= lo * (1.0 - hi); break;
            default: value *= spec.p(lo) * spec.q(hi); break;
        }
    }
    return value;
}

double norm_const(const KernelSpec& spec, std::span<const int> levels) {
    if (levels.size() != static_cast<std::size_t>(spec.dim())) {
        throw DimError("level vector dimension does not match kernel");
    }
    double c = 1.0;
    for (int l : levels) c *= spec.level_constant(l);
    return c;
}

double wronskian(const KernelSpec& spec, double s, double t) {
    return spec.p(t) * spec.q(s) - spec.p(s) * spec.q(t);
}

std::string_view kind_name(KernelKind kind) noexcept {
    switch (kind) {
        case KernelKind::Laplace: return "laplace";
        case KernelKind::WeightedSobolev: return "sobolev";
        case KernelKind::BrownianBridge: return "bb";
        case KernelKind::Custom: return "custom";
    }
    return "custom";
}

KernelKind parse_kind(std::string_view name) {
    if (name == "laplace") return KernelKind::Laplace;
    if (name == "sobolev") return KernelKind::WeightedSobolev;
    if (name == "bb") return KernelKind::BrownianBridge;
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

}  // namespace eof
