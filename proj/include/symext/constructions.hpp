// constructions.hpp: Closed-form states and symmetric extensions.
//
// Used both as workload generators and as solver-independent oracles:
// the qutrit family with its explicit six-term extension, the filtered
// variant, the rank-one extension, the Υ family, isotropic states and the
// U ⊗ U ⊗ U-covariant extension of the isotropic state at the border.

#pragma once

#include "symext/linalg.hpp"
#include "symext/quantum.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace symext {

namespace detail {

inline Eigen::Index basis3(Index a, Index b, Index c, Index d) {
    return static_cast<Eigen::Index>((a * d + b) * d + c);
}

inline Eigen::Index basis2(Index a, Index b, Index d) { return static_cast<Eigen::Index>(a * d + b); }

inline void require_fidelity(double f, const char* who) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument(std::string(who) + ": F must lie in [0, 1]");
}

inline void require_local_dim(Index d, Index lo, Index hi, const char* who) {
    if (d < lo || d > hi) {
        throw std::invalid_argument(std::string(who) + ": d must lie in [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
    }
}

} // namespace detail

// ------------------------------ qutrit family --------------------------------

/// F·|Φ><Φ|/3 + (1−F)/3·(|01><01| + |20><20| + |21><21|) on 3 ⊗ 3.
inline DensityMatrix example_state(double f) {
    detail::require_fidelity(f, "example_state");
    ComplexMatrix m = ComplexMatrix::Zero(9, 9);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) m(detail::basis2(i, i, 3), detail::basis2(j, j, 3)) = f / 3.0;
    for (auto [a, b] : {std::pair<Index, Index>{0, 1}, {2, 0}, {2, 1}})
        m(detail::basis2(a, b, 3), detail::basis2(a, b, 3)) = (1.0 - f) / 3.0;
    return DensityMatrix(m, TensorDims{3, 3});
}

/// Local filter W = diag(1, 1/√F, 1/√(2−F)) on the first factor, renormalized.
/// The first-factor marginal of the result is I/3.
inline DensityMatrix filtered_state(double f) {
    detail::require_fidelity(f, "filtered_state");
    if (f == 0.0) throw std::invalid_argument("filtered_state: filter is singular at F = 0");
    ComplexMatrix w = ComplexMatrix::Zero(3, 3);
    w(0, 0) = 1.0;
    w(1, 1) = 1.0 / std::sqrt(f);
    w(2, 2) = 1.0 / std::sqrt(2.0 - f);
    const ComplexMatrix full = kron(w, ComplexMatrix::Identity(3, 3));
    const ComplexMatrix m = full * example_state(f).matrix() * full.adjoint();
    return DensityMatrix(m / m.trace().real(), TensorDims{3, 3});
}

/// Eigenvalue split of the six-term extension. λ₁ = F/3 and λ₃ = (1−2F)/3 are
/// fixed; λ₀ + λ₄ = (1−F)/3 and λ₂ + λ₅ = (1−2F)/3 are required for the
/// B′-trace to reproduce example_state, and λ₂ = λ₄ for B ↔ B′ symmetry
/// (|021> and |120> are exchanged by the swap).
struct ExampleFamilyParams {
    double F = 0.0;
    std::optional<std::pair<double, double>> lambda_overrides; // (λ₀, λ₂)

    std::array<double, 6> lambdas() const {
        const double f = F;
        double l0 = 1.0 / 6.0;
        double l2 = (1.0 - 2.0 * f) / 6.0;
        if (lambda_overrides) std::tie(l0, l2) = *lambda_overrides;
        return {l0, f / 3.0, l2, (1.0 - 2.0 * f) / 3.0, (1.0 - f) / 3.0 - l0, (1.0 - 2.0 * f) / 3.0 - l2};
    }

    void validate() const {
        constexpr double eps = 1e-14;
        detail::require_fidelity(F, "example_extension");
        if (F > 0.5 + eps) throw invariant_error("example_extension: F > 1/2 gives negative weights (1-2F) < 0");
        if (!lambda_overrides) return;
        const auto [l0, l2] = *lambda_overrides;
        if (l0 < -eps || l0 > (1.0 - F) / 3.0 + eps) throw std::invalid_argument("example_extension: lambda0 outside [0, (1-F)/3]");
        if (l2 < -eps || l2 > (1.0 - 2.0 * F) / 3.0 + eps) throw std::invalid_argument("example_extension: lambda2 outside [0, (1-2F)/3]");
        const double l4 = (1.0 - F) / 3.0 - l0;
        if (std::abs(l4 - l2) > 1e-12) throw std::invalid_argument("example_extension: lambda4 must equal lambda2 for B <-> B' symmetry");
    }

    /// Symmetric split with λ₂ = λ₄ = t, t ∈ [0, (1−2F)/3].
    static ExampleFamilyParams symmetric_split(double f, double t) {
        return {f, std::pair{(1.0 - f) / 3.0 - t, t}};
    }
};

namespace detail {

// Six vectors of the extension, written in (B′, A, B) order; φ₁ unnormalized.
inline std::array<ComplexVector, 6> example_extension_vectors() {
    auto ket = [](std::initializer_list<std::array<Index, 3>> terms) {
        ComplexVector v = ComplexVector::Zero(27);
        for (const auto& t : terms) v(basis3(t[0], t[1], t[2], 3)) += 1.0;
        return v;
    };
    return {ket({{0, 2, 0}}),
            ket({{0, 0, 1}, {1, 0, 0}, {1, 1, 1}, {1, 2, 2}, {2, 2, 1}}),
            ket({{0, 2, 1}}),
            ket({{1, 0, 1}}),
            ket({{1, 2, 0}}),
            ket({{1, 2, 1}})};
}

// (B′, A, B) → canonical (A, B, B′)
inline ComplexMatrix from_listing_order(const ComplexMatrix& m) {
    return permute_systems(m, TensorDims{3, 3, 3}, {1, 2, 0});
}

} // namespace detail

/// Σ λᵢ |φᵢ><φᵢ| in canonical A ⊗ B ⊗ B′ order; swap-invariant on (B, B′) with
/// Tr_B′ equal to example_state(F).
inline ComplexMatrix example_extension(const ExampleFamilyParams& params) {
    params.validate();
    const auto lambdas = params.lambdas();
    const auto vecs = detail::example_extension_vectors();
    ComplexMatrix m = ComplexMatrix::Zero(27, 27);
    for (std::size_t i = 0; i < 6; ++i) m += lambdas[i] * vecs[i] * vecs[i].adjoint();
    return detail::from_listing_order(m);
}

/// Smallest eigenvalue of Σ λᵢ|φᵢ><φᵢ| with the default split, evaluated for
/// any F ∈ [0, 1] (negative once F > 1/2).
inline double example_extension_min_eigenvalue(double f) {
    detail::require_fidelity(f, "example_extension_min_eigenvalue");
    const ExampleFamilyParams params{f, std::nullopt};
    const auto lambdas = params.lambdas();
    const auto vecs = detail::example_extension_vectors();
    ComplexMatrix m = ComplexMatrix::Zero(27, 27);
    for (std::size_t i = 0; i < 6; ++i) m += lambdas[i] * vecs[i] * vecs[i].adjoint();
    return hermitian_eigenvalues(m)(0);
}

struct ExtensionWithReduction {
    ComplexMatrix extension; // A ⊗ B ⊗ B′
    DensityMatrix reduction; // A ⊗ B
};

/// (1/5)|φ₁><φ₁| and its reduction 3/5·P₊ + 1/5·|01><01| + 1/5·|21><21|.
inline ExtensionWithReduction rank1_extension_state() {
    const ComplexVector phi1 = detail::example_extension_vectors()[1];
    const ComplexMatrix ext = detail::from_listing_order(phi1 * phi1.adjoint() / 5.0);
    return {ext, DensityMatrix(partial_trace(ext, TensorDims{3, 3, 3}, {0, 1}), TensorDims{3, 3})};
}

/// d/(2d−1)·P₊ + 1/(2d−1)·Σ_{i=1}^{d−1} |i0><i0|.
inline DensityMatrix upsilon(Index d) {
    if (d < 2) throw std::invalid_argument("upsilon: d must be at least 2");
    const double dd = static_cast<double>(d);
    ComplexMatrix m = dd / (2.0 * dd - 1.0) * max_entangled_projector(d);
    for (Index i = 1; i < d; ++i) m(detail::basis2(i, 0, d), detail::basis2(i, 0, d)) += 1.0 / (2.0 * dd - 1.0);
    return DensityMatrix(m, TensorDims{d, d});
}

// ------------------------------ isotropic family -----------------------------

/// ρ(d, F) = d²/(d²−1)·[(1−F)·I/d² + (F − 1/d²)·P₊].
inline DensityMatrix isotropic(Index d, double f) {
    if (d < 2) throw std::invalid_argument("isotropic: d must be at least 2");
    detail::require_fidelity(f, "isotropic");
    const double d2 = static_cast<double>(d * d);
    const auto n = static_cast<Eigen::Index>(d * d);
    const ComplexMatrix m = d2 / (d2 - 1.0) *
                            ((1.0 - f) * ComplexMatrix::Identity(n, n) / d2 + (f - 1.0 / d2) * max_entangled_projector(d));
    return DensityMatrix(m, TensorDims{d, d});
}

/// Largest extendible isotropic fidelity, (d+1)/(2d).
inline double f_max(Index d) {
    if (d < 2) throw std::invalid_argument("f_max: d must be at least 2");
    return (static_cast<double>(d) + 1.0) / (2.0 * static_cast<double>(d));
}

struct WernerOperators {
    ComplexMatrix X;  // |Φ><Φ| ⊗ I, Φ unnormalized
    ComplexMatrix V;  // swap of factors 2 and 3
    ComplexMatrix S0;
    ComplexMatrix S1;
};

inline WernerOperators werner_operators(Index d) {
    detail::require_local_dim(d, 2, 6, "werner_operators");
    const double dd = static_cast<double>(d);
    const auto nd = static_cast<Eigen::Index>(d);
    const ComplexVector phi = max_entangled_vector(d);
    WernerOperators w;
    w.X = kron(phi * phi.adjoint(), ComplexMatrix::Identity(nd, nd));
    w.V = swap_operator(TensorDims{d, d, d}, 1, 2);
    const ComplexMatrix vxv = w.V * w.X * w.V;
    const ComplexMatrix xv_vx = w.X * w.V + w.V * w.X;
    w.S0 = (dd * (w.X + vxv) - xv_vx) / (dd * dd - 1.0);
    w.S1 = (dd * xv_vx - (w.X + vxv)) / (dd * dd - 1.0);
    return w;
}

/// (S₀ + S₁)/(2d): symmetric extension of the isotropic state at F = f_max(d).
inline ComplexMatrix omega_extension(Index d) {
    detail::require_local_dim(d, 2, 6, "omega_extension");
    const auto w = werner_operators(d);
    return (w.S0 + w.S1) / (2.0 * static_cast<double>(d));
}

} // namespace symext
