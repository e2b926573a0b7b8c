// param.hpp: Normalized relative-entropy distance to the symmetrically
// extendible set, and the bounds on one-way distillable entanglement built
// from it.
//
//   R_E(ρ) = δ(d) · inf_{σ extendible} R(ρ̃ ‖ σ),   δ(d) = −log d / log((d+1)/2d)
//
// with ρ̃ the embedding of ρ into d ⊗ d, d = max(d_A, d_B). The infimum is
// approached by conditional gradient (Frank–Wolfe). The linear subproblem
// over extendible states has a closed form: min_σ <G, σ> equals the smallest
// eigenvalue of the swap-symmetrized lift G ⊗ I_B′, attained at the B′-trace
// of the symmetrized projector onto its eigenvector. Every iterate is
// extendible, so r_value is always an upper estimate, and the Frank–Wolfe gap
// bounds its excess.

#pragma once

#include "symext/extend.hpp"
#include "symext/linalg.hpp"
#include "symext/quantum.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace symext {

/// −log₂ d / log₂((d+1)/(2d)); δ(d)·(−log₂ f_max(d)) = log₂ d.
inline double delta(Index d) {
    if (d < 2) throw std::invalid_argument("delta: d must be at least 2");
    const double dd = static_cast<double>(d);
    return -std::log2(dd) / std::log2((dd + 1.0) / (2.0 * dd));
}

/// Gradient of σ ↦ R(ρ‖σ) (bits) with respect to the Hilbert–Schmidt inner
/// product, from the divided differences of log in σ's eigenbasis:
/// G = −U (ρ′ ∘ Φ) U†, ρ′ = U†ρU, Φᵢⱼ = (ln λᵢ − ln λⱼ)/((λᵢ − λⱼ) ln 2).
inline ComplexMatrix relative_entropy_gradient(const ComplexMatrix& rho, const HermitianEig& sigma) {
    const double ln2 = std::log(2.0);
    const auto n = sigma.values.size();
    RealVector lam(n);
    for (Eigen::Index i = 0; i < n; ++i) lam(i) = std::max(sigma.values(i), log_floor);
    ComplexMatrix r = sigma.vectors.adjoint() * rho * sigma.vectors;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = lam(i), b = lam(j);
            const double diff = a - b;
            double phi;
            if (std::abs(diff) <= 1e-6 * std::max(a, b))
                phi = 2.0 / ((a + b) * ln2);
            else
                phi = std::log1p(diff / b) / (diff * ln2);
            r(i, j) *= -phi;
        }
    const ComplexMatrix g = sigma.vectors * r * sigma.vectors.adjoint();
    return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix relative_entropy_gradient(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.side() != sigma.side()) throw dimension_error("relative_entropy_gradient: dimension mismatch");
    return relative_entropy_gradient(rho.matrix(), hermitian_eig(sigma.matrix()));
}

struct ParamOptions {
    int max_iter = 2000;
    double gap_tol = 1e-5;
    bool warm_start = true; // seed with the target itself when it is certified extendible
    double extension_tol = 1e-7;
    int extension_max_iter = 20000;
};

struct ParamResult {
    double r_value = 0.0;      // δ · divergence, bits
    DensityMatrix sigma_star;  // best extendible state found, d ⊗ d
    double fw_gap = 0.0;       // Frank–Wolfe gap at the last linearization
    int iterations = 0;
    double delta = 0.0;
    double divergence = 0.0;   // R(ρ̃ ‖ σ*), unnormalized
    std::vector<double> objective_trace;
    std::optional<Verdict> extension_verdict; // set when warm start ran the solver
};

namespace detail {

inline constexpr double fw_mixing_floor = 1e-12;

class RelativeEntropyObjective {
public:
    explicit RelativeEntropyObjective(const ComplexMatrix& rho)
        : rho_(rho), spectrum_(hermitian_eigenvalues(rho)) {}

    double operator()(const ComplexMatrix& sigma) const { return value(eig_of(sigma)); }
    double value(const HermitianEig& e) const { return relative_entropy_raw(rho_, spectrum_, e); }
    const ComplexMatrix& rho() const { return rho_; }

    static HermitianEig eig_of(const ComplexMatrix& sigma) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sigma + sigma.adjoint()));
        return {es.eigenvalues(), es.eigenvectors()};
    }

private:
    ComplexMatrix rho_;
    RealVector spectrum_;
};

inline ComplexMatrix mix_floor(const ComplexMatrix& sigma) {
    const auto n = sigma.rows();
    return (1.0 - fw_mixing_floor) * sigma +
           fw_mixing_floor * ComplexMatrix::Identity(n, n) / static_cast<double>(n);
}

// argmin over extendible σ of <G, σ>.
inline ComplexMatrix linear_minimizer(const ComplexMatrix& g, Index d, const std::vector<Index>& swap_src) {
    const ComplexMatrix lifted = kron(g, ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    const ComplexMatrix sym = 0.5 * (lifted + permute_basis(lifted, swap_src));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    const ComplexVector v = es.eigenvectors().col(0);
    const ComplexMatrix proj = v * v.adjoint();
    const ComplexMatrix x = 0.5 * (proj + permute_basis(proj, swap_src));
    return trace_out_last(x, d * d, d);
}

// Golden-section search for argmin over γ ∈ [0, 1] of f((1−γ)σ + γs).
template <typename F>
std::pair<double, double> golden_section(F&& f, int iterations = 60) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double c = b - ratio * (b - a), e = a + ratio * (b - a);
    double fc = f(c), fe = f(e);
    for (int i = 0; i < iterations; ++i) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + ratio * (b - a);
            fe = f(e);
        }
    }
    return fc < fe ? std::pair{c, fc} : std::pair{e, fe};
}

inline std::optional<ComplexMatrix> extendible_seed(const DensityMatrix& rho, const ParamOptions& opt, Verdict& verdict) {
    const auto cert = solve_extension({rho, opt.extension_tol, opt.extension_max_iter});
    verdict = cert.verdict;
    if (cert.verdict != Verdict::Feasible) return std::nullopt;
    const Index d = rho.dims()[0];
    const auto swap_src = swap_indices(cert.dims, 1, 2);
    ComplexMatrix x = clamp_psd(0.5 * (cert.candidate + permute_basis(cert.candidate, swap_src)));
    x = 0.5 * (x + permute_basis(x, swap_src));
    x /= x.trace().real();
    return trace_out_last(x, d * d, d);
}

} // namespace detail

/// Conditional-gradient upper estimate of R_E(ρ).
inline ParamResult r_e_estimate(const DensityMatrix& rho, const ParamOptions& opt = {}) {
    detail::require_bipartite(rho, "r_e_estimate");
    const DensityMatrix target = embed_square(rho);
    const Index d = target.dims()[0];
    const auto n = static_cast<Eigen::Index>(d * d);
    const auto swap_src = swap_indices(TensorDims{d, d, d}, 1, 2);
    const detail::RelativeEntropyObjective objective(target.matrix());

    ComplexMatrix sigma = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
    double value = objective(sigma);

    ParamResult out{0.0, DensityMatrix::maximally_mixed(target.dims())};
    if (opt.warm_start) {
        Verdict v = Verdict::Inconclusive;
        if (auto seed = detail::extendible_seed(target, opt, v)) {
            const ComplexMatrix s = detail::mix_floor(*seed);
            const double sv = objective(s);
            if (sv < value) {
                sigma = s;
                value = sv;
            }
        }
        out.extension_verdict = v;
    }
    out.objective_trace.push_back(value);

    double gap = std::numeric_limits<double>::infinity();
    int k = 0;
    for (; k < opt.max_iter; ++k) {
        const auto eig = detail::RelativeEntropyObjective::eig_of(sigma);
        const ComplexMatrix grad = relative_entropy_gradient(objective.rho(), eig);
        const ComplexMatrix vertex = detail::linear_minimizer(grad, d, swap_src);
        gap = hs_inner(grad, sigma - vertex).real();
        if (gap <= opt.gap_tol) break;

        auto along = [&](double gamma) { return detail::mix_floor((1.0 - gamma) * sigma + gamma * vertex); };
        const auto [gamma, fnew] = detail::golden_section([&](double g) { return objective(along(g)); });
        if (!(fnew < value)) break; // no descent left at working precision
        sigma = along(gamma);
        value = fnew;
        out.objective_trace.push_back(value);
    }
    if (out.objective_trace.size() > 1 &&
        !std::is_sorted(out.objective_trace.rbegin(), out.objective_trace.rend()))
        throw std::logic_error("r_e_estimate: objective increased");

    out.sigma_star = DensityMatrix(sigma, target.dims());
    out.fw_gap = std::max(0.0, gap);
    out.iterations = k;
    out.delta = delta(d);
    out.divergence = std::max(0.0, value);
    out.r_value = out.delta * out.divergence;
    return out;
}

/// Coherent information S(ρ_B) − S(ρ_AB); its positive part lower-bounds D→.
inline double hashing_lower_bound(const DensityMatrix& rho) { return coherent_information(rho); }

struct BoundReport {
    double hashing = 0.0;     // raw coherent information
    double lower = 0.0;       // max(0, hashing)
    double r_estimate = 0.0;  // single-copy R_E upper estimate
    double fw_gap = 0.0;
    Verdict extendibility = Verdict::Inconclusive;
    bool zero_certified = false; // symmetric extension found ⇒ D→ = 0
    double upper = 0.0;          // 0 when certified, else r_estimate
    double negativity = 0.0;
    bool consistent = true;      // lower ≤ upper
};

inline BoundReport bound_report(const DensityMatrix& rho, const ParamOptions& opt = {}) {
    detail::require_bipartite(rho, "bound_report");
    ParamOptions o = opt;
    o.warm_start = true;
    const ParamResult p = r_e_estimate(rho, o);

    BoundReport b;
    b.hashing = hashing_lower_bound(rho);
    b.lower = std::max(0.0, b.hashing);
    b.r_estimate = p.r_value;
    b.fw_gap = p.fw_gap;
    b.extendibility = p.extension_verdict.value_or(Verdict::Inconclusive);
    b.zero_certified = b.extendibility == Verdict::Feasible;
    b.upper = b.zero_certified ? 0.0 : p.r_value;
    b.negativity = negativity(rho);
    b.consistent = b.lower <= b.upper + 1e-9;
    return b;
}

struct TwoCopyReport {
    double single_copy = 0.0;
    double two_copy = 0.0; // δ_AB · inf R(ρ⊗ρ ‖ σ) / 2
    bool subadditive = false;
    ParamResult single;
    ParamResult doubled;
};

/// Two-copy probe of the regularization for qubit pairs. ρ⊗ρ is regrouped as
/// (A₁A₂) ⊗ (B₁B₂) = 4 ⊗ 4; the normalization stays at the single-copy δ(2).
inline TwoCopyReport r_e_two_copy(const DensityMatrix& rho, const ParamOptions& opt = {}) {
    if (!(rho.dims() == TensorDims{2, 2})) throw dimension_error("r_e_two_copy: state must be 2 x 2");
    const ComplexMatrix pair = permute_systems(kron(rho.matrix(), rho.matrix()), TensorDims{2, 2, 2, 2}, {0, 2, 1, 3});
    const DensityMatrix doubled(pair, TensorDims{4, 4});

    TwoCopyReport rep{0.0, 0.0, false, r_e_estimate(rho, opt), r_e_estimate(doubled, opt)};
    rep.single_copy = rep.single.r_value;
    rep.two_copy = delta(2) * rep.doubled.divergence / 2.0;
    rep.subadditive = rep.two_copy <= rep.single_copy + 2e-3;
    return rep;
}

} // namespace symext
