// quantum.hpp: Density matrices, Kraus channels, the Choi–Jamiołkowski
// bridge and the entropic functionals used by the extension test.

#pragma once

#include "symext/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace symext {

// ------------------------------ DensityMatrix -------------------------------

/// Hermitian, positive semidefinite, unit-trace matrix tagged with its
/// tensor-factor dimensions. Construction validates and hermitizes.
class DensityMatrix {
public:
    static constexpr double trace_tolerance = 1e-9;
    static constexpr double positivity_tolerance = 1e-9;

    DensityMatrix(ComplexMatrix m, TensorDims dims) : dims_(std::move(dims)) {
        detail::require_matches(m, dims_, "DensityMatrix");
        matrix_ = hermitize(m, "DensityMatrix");
        const double tr_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
        if (tr_err > trace_tolerance)
            throw invariant_error("DensityMatrix: " + detail::fmt_residual("trace differs from one", tr_err, trace_tolerance));
        const double min_eig = hermitian_eigenvalues(matrix_)(0);
        if (min_eig < -positivity_tolerance)
            throw invariant_error("DensityMatrix: " + detail::fmt_residual("negative eigenvalue", -min_eig, positivity_tolerance));
    }

    /// Single-factor state.
    explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(m, TensorDims{static_cast<Index>(m.rows())}) {}

    static DensityMatrix maximally_mixed(const TensorDims& dims) {
        const auto n = static_cast<Eigen::Index>(dims.total());
        return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dims);
    }

    /// Pure state |psi><psi| after normalizing psi.
    static DensityMatrix pure(const ComplexVector& psi, const TensorDims& dims) {
        const double nrm = psi.norm();
        if (!(nrm > 0.0)) throw std::invalid_argument("DensityMatrix::pure: zero vector");
        const ComplexVector v = psi / nrm;
        return DensityMatrix(v * v.adjoint(), dims);
    }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const TensorDims& dims() const noexcept { return dims_; }
    Index side() const noexcept { return static_cast<Index>(matrix_.rows()); }
    bool is_bipartite() const noexcept { return dims_.size() == 2; }

private:
    ComplexMatrix matrix_;
    TensorDims dims_;
};

/// Tensor product of two states; dims are concatenated.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()), a.dims() + b.dims());
}

inline DensityMatrix reduce(const DensityMatrix& rho, std::vector<Index> keep) {
    std::vector<Index> kd;
    std::sort(keep.begin(), keep.end());
    for (Index k : keep) kd.push_back(rho.dims()[k]);
    return DensityMatrix(partial_trace(rho.matrix(), rho.dims(), keep), TensorDims(kd));
}

namespace detail {

inline void require_bipartite(const DensityMatrix& rho, const char* who) {
    if (!rho.is_bipartite()) throw dimension_error(std::string(who) + ": state must be bipartite");
}

inline Index require_square_bipartite(const DensityMatrix& rho, const char* who) {
    require_bipartite(rho, who);
    if (rho.dims()[0] != rho.dims()[1])
        throw dimension_error(std::string(who) + ": local dimensions must be equal");
    return rho.dims()[0];
}

} // namespace detail

/// |Φ> = Σ_i |ii>, unnormalized.
inline ComplexVector max_entangled_vector(Index d) {
    ComplexVector phi = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
    for (Index i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i * d + i)) = 1.0;
    return phi;
}

/// Normalized projector P₊ onto |Φ>/√d.
inline ComplexMatrix max_entangled_projector(Index d) {
    const ComplexVector phi = max_entangled_vector(d);
    return phi * phi.adjoint() / static_cast<double>(d);
}

inline DensityMatrix max_entangled_state(Index d) {
    return DensityMatrix(max_entangled_projector(d), TensorDims{d, d});
}

// ------------------------------- KrausChannel -------------------------------

/// Trace-preserving completely positive map ρ ↦ Σ K ρ K†, each K of shape
/// d_out × d_in.
class KrausChannel {
public:
    static constexpr double tp_tolerance = 1e-9;

    KrausChannel(Index d_in, Index d_out, std::vector<ComplexMatrix> kraus)
        : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)) {
        if (d_in_ == 0 || d_out_ == 0) throw dimension_error("KrausChannel: dimensions must be positive");
        if (kraus_.empty()) throw dimension_error("KrausChannel: at least one Kraus operator required");
        const auto di = static_cast<Eigen::Index>(d_in_);
        ComplexMatrix sum = ComplexMatrix::Zero(di, di);
        for (const auto& k : kraus_) {
            if (k.rows() != static_cast<Eigen::Index>(d_out_) || k.cols() != di)
                throw dimension_error("KrausChannel: Kraus operator has wrong shape");
            if (!k.allFinite()) throw invariant_error("KrausChannel: Kraus operator has non-finite entries");
            sum += k.adjoint() * k;
        }
        const double err = (sum - ComplexMatrix::Identity(di, di)).norm();
        if (err > tp_tolerance)
            throw invariant_error("KrausChannel: " + detail::fmt_residual("sum of K†K differs from identity", err, tp_tolerance));
    }

    Index d_in() const noexcept { return d_in_; }
    Index d_out() const noexcept { return d_out_; }
    const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

private:
    Index d_in_;
    Index d_out_;
    std::vector<ComplexMatrix> kraus_;
};

inline KrausChannel identity_channel(Index d) {
    const auto n = static_cast<Eigen::Index>(d);
    return KrausChannel(d, d, {ComplexMatrix::Identity(n, n)});
}

/// ρ ↦ (1−p)ρ + p·I/d, realized with the Heisenberg–Weyl operators X^a Z^b.
inline KrausChannel depolarizing_channel(Index d, double p) {
    if (d < 2) throw dimension_error("depolarizing_channel: d must be at least 2");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
    const auto n = static_cast<Eigen::Index>(d);
    const double dd = static_cast<double>(d);
    const double two_pi = 2.0 * std::acos(-1.0);

    ComplexMatrix shift = ComplexMatrix::Zero(n, n);
    ComplexMatrix clock = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        shift((k + 1) % n, k) = 1.0;
        clock(k, k) = std::polar(1.0, two_pi * static_cast<double>(k) / dd);
    }

    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - p + p / (dd * dd)) * ComplexMatrix::Identity(n, n));
    const double w = std::sqrt(p) / dd;
    if (w > 0.0) {
        ComplexMatrix xa = ComplexMatrix::Identity(n, n);
        for (Index a = 0; a < d; ++a) {
            ComplexMatrix zb = ComplexMatrix::Identity(n, n);
            for (Index b = 0; b < d; ++b) {
                if (a != 0 || b != 0) kraus.push_back(w * xa * zb);
                zb = zb * clock;
            }
            xa = shift * xa;
        }
    }
    return KrausChannel(d, d, std::move(kraus));
}

// ------------------------------- ChoiState ----------------------------------

/// Choi state (id ⊗ Λ)(P₊) on d_in ⊗ d_out; its input marginal is I/d_in.
class ChoiState {
public:
    static constexpr double marginal_tolerance = 1e-9;

    explicit ChoiState(DensityMatrix state) : state_(std::move(state)) {
        detail::require_bipartite(state_, "ChoiState");
        const Index d_in = state_.dims()[0];
        const auto n = static_cast<Eigen::Index>(d_in);
        const ComplexMatrix marginal = partial_trace(state_.matrix(), state_.dims(), {0});
        const double err = (marginal - ComplexMatrix::Identity(n, n) / static_cast<double>(d_in)).norm();
        if (err > marginal_tolerance)
            throw invariant_error("ChoiState: " + detail::fmt_residual("input marginal differs from I/d_in (channel not trace-preserving)", err, marginal_tolerance));
    }

    const DensityMatrix& state() const noexcept { return state_; }
    Index d_in() const noexcept { return state_.dims()[0]; }
    Index d_out() const noexcept { return state_.dims()[1]; }

private:
    DensityMatrix state_;
};

inline ChoiState choi_from_kraus(const KrausChannel& ch) {
    const Index d = ch.d_in();
    const ComplexVector phi = max_entangled_vector(d) / std::sqrt(static_cast<double>(d));
    const auto n = static_cast<Eigen::Index>(d * ch.d_out());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    const ComplexMatrix id = ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& k : ch.kraus()) {
        const ComplexVector v = kron(id, k) * phi;
        out += v * v.adjoint();
    }
    return ChoiState(DensityMatrix(out, TensorDims{d, ch.d_out()}));
}

inline KrausChannel kraus_from_choi(const ChoiState& c) {
    constexpr double rank_cutoff = 1e-10;
    const Index d_in = c.d_in();
    const Index d_out = c.d_out();
    const auto eig = hermitian_eig(static_cast<double>(d_in) * c.state().matrix());
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index e = eig.values.size(); e-- > 0;) {
        const double lambda = eig.values(e);
        if (lambda <= rank_cutoff) break;
        ComplexMatrix k(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
        for (Index i = 0; i < d_in; ++i)
            for (Index j = 0; j < d_out; ++j)
                k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                    std::sqrt(lambda) * eig.vectors(static_cast<Eigen::Index>(i * d_out + j), e);
        kraus.push_back(std::move(k));
    }
    return KrausChannel(d_in, d_out, std::move(kraus));
}

/// Apply the channel to the whole state. The output is a single factor of
/// dimension d_out unless the input was itself single-factor.
inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
    if (rho.side() != ch.d_in()) throw dimension_error("apply_channel: state dimension differs from channel input");
    const auto n = static_cast<Eigen::Index>(ch.d_out());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix(out, TensorDims{ch.d_out()});
}

/// Apply the channel to one subsystem, identity elsewhere.
inline DensityMatrix apply_channel_to(const KrausChannel& ch, const DensityMatrix& rho, Index subsystem) {
    const auto& dims = rho.dims();
    if (subsystem >= dims.size()) throw dimension_error("apply_channel_to: subsystem index out of range");
    if (dims[subsystem] != ch.d_in()) throw dimension_error("apply_channel_to: subsystem dimension differs from channel input");
    Index before = 1, after = 1;
    for (Index k = 0; k < subsystem; ++k) before *= dims[k];
    for (Index k = subsystem + 1; k < dims.size(); ++k) after *= dims[k];
    const ComplexMatrix id_b = ComplexMatrix::Identity(static_cast<Eigen::Index>(before), static_cast<Eigen::Index>(before));
    const ComplexMatrix id_a = ComplexMatrix::Identity(static_cast<Eigen::Index>(after), static_cast<Eigen::Index>(after));

    std::vector<Index> nd = dims.values();
    nd[subsystem] = ch.d_out();
    const TensorDims out_dims(nd);
    const auto n = static_cast<Eigen::Index>(out_dims.total());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& k : ch.kraus()) {
        const ComplexMatrix full = kron(kron(id_b, k), id_a);
        out += full * rho.matrix() * full.adjoint();
    }
    return DensityMatrix(out, out_dims);
}

// ------------------------------ entropies -----------------------------------

namespace detail {

inline double entropy_of_spectrum(const RealVector& values) {
    double s = 0.0;
    for (double x : values)
        if (x > 1e-12) s -= x * std::log2(x);
    return s;
}

} // namespace detail

/// von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    return std::max(0.0, detail::entropy_of_spectrum(hermitian_eigenvalues(rho.matrix())));
}

inline constexpr double log_floor = 1e-12;

namespace detail {

// Tr[ρ log ρ] − Tr[ρ log σ] with σ's eigenvalues clamped at log_floor, or +∞
// when ρ has weight above 1e-8 on the kernel of σ. Shared by the public
// relative_entropy and the conditional-gradient objective.
inline double relative_entropy_raw(const ComplexMatrix& rho, const RealVector& rho_spectrum, const HermitianEig& sigma) {
    constexpr double support_tolerance = 1e-8;
    const ComplexMatrix r = sigma.vectors.adjoint() * rho * sigma.vectors;
    double kernel_weight = 0.0;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < sigma.values.size(); ++i) {
        const double w = r(i, i).real();
        if (sigma.values(i) <= log_floor) kernel_weight += w;
        cross += w * std::log2(std::max(sigma.values(i), log_floor));
    }
    if (kernel_weight > support_tolerance) return std::numeric_limits<double>::infinity();
    return -entropy_of_spectrum(rho_spectrum) - cross;
}

} // namespace detail

/// Quantum relative entropy R(ρ‖σ) in bits; +∞ when supp ρ ⊄ supp σ.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.side() != sigma.side()) throw dimension_error("relative_entropy: dimension mismatch");
    const double r = detail::relative_entropy_raw(rho.matrix(), hermitian_eigenvalues(rho.matrix()), hermitian_eig(sigma.matrix()));
    return std::isinf(r) ? r : std::max(0.0, r);
}

/// S(Tr_A ρ) − S(ρ).
inline double coherent_information(const DensityMatrix& rho) {
    detail::require_bipartite(rho, "coherent_information");
    return von_neumann_entropy(reduce(rho, {1})) - von_neumann_entropy(rho);
}

/// Tr[P₊ ρ].
inline double fidelity_maxent(const DensityMatrix& rho) {
    const Index d = detail::require_square_bipartite(rho, "fidelity_maxent");
    Complex acc{0.0, 0.0};
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            acc += rho.matrix()(static_cast<Eigen::Index>(i * d + i), static_cast<Eigen::Index>(j * d + j));
    return acc.real() / static_cast<double>(d);
}

/// Sum of |negative eigenvalues| of the partial transpose on B.
inline double negativity(const DensityMatrix& rho) {
    detail::require_bipartite(rho, "negativity");
    const RealVector ev = hermitian_eigenvalues(partial_transpose(rho.matrix(), rho.dims(), 1));
    double neg = 0.0;
    for (double x : ev)
        if (x < 0.0) neg -= x;
    return neg;
}

/// Zero-pad a d_A ⊗ d_B state into d ⊗ d, d = max(d_A, d_B).
inline DensityMatrix embed_square(const DensityMatrix& rho) {
    detail::require_bipartite(rho, "embed_square");
    const Index da = rho.dims()[0], db = rho.dims()[1];
    const Index d = std::max(da, db);
    if (da == db) return rho;
    const auto n = static_cast<Eigen::Index>(d * d);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Index a = 0; a < da; ++a)
        for (Index b = 0; b < db; ++b)
            for (Index a2 = 0; a2 < da; ++a2)
                for (Index b2 = 0; b2 < db; ++b2)
                    out(static_cast<Eigen::Index>(a * d + b), static_cast<Eigen::Index>(a2 * d + b2)) =
                        rho.matrix()(static_cast<Eigen::Index>(a * db + b), static_cast<Eigen::Index>(a2 * db + b2));
    return DensityMatrix(out, TensorDims{d, d});
}

/// U ⊗ U* twirl, in closed form: F·P₊ + (1−F)(I−P₊)/(d²−1).
inline DensityMatrix twirl_isotropic(const DensityMatrix& rho) {
    const Index d = detail::require_square_bipartite(rho, "twirl_isotropic");
    const double f = fidelity_maxent(rho);
    const auto n = static_cast<Eigen::Index>(d * d);
    const ComplexMatrix p = max_entangled_projector(d);
    const ComplexMatrix out = f * p + (1.0 - f) * (ComplexMatrix::Identity(n, n) - p) / static_cast<double>(d * d - 1);
    return DensityMatrix(out, rho.dims());
}

} // namespace symext
