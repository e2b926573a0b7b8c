// linalg.hpp: Dense complex matrices over multipartite tensor-product spaces.
// Kronecker products, partial trace / transpose, subsystem permutations and
// the Hermitian spectral helpers (eigensystem, PSD projection, matrix log).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symext {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = std::size_t;

// Thrown when shapes, subsystem indices or tensor factors do not line up.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numeric invariant (Hermiticity, trace, positivity, ...) fails.
class invariant_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline std::string fmt_residual(const std::string& what, double residual, double tol) {
    std::ostringstream os;
    os.precision(3);
    os << what << " (residual " << std::scientific << residual << " > tolerance " << tol << ")";
    return os.str();
}

} // namespace detail

// ------------------------------- TensorDims ---------------------------------

/// Ordered local dimensions of a tensor-product space, one per subsystem.
class TensorDims {
public:
    TensorDims() = default;
    TensorDims(std::initializer_list<Index> dims) : dims_(dims) { validate(); }
    explicit TensorDims(std::vector<Index> dims) : dims_(std::move(dims)) { validate(); }

    Index size() const noexcept { return dims_.size(); }
    Index operator[](Index k) const { return dims_.at(k); }
    const std::vector<Index>& values() const noexcept { return dims_; }
    auto begin() const noexcept { return dims_.begin(); }
    auto end() const noexcept { return dims_.end(); }

    /// Product of the local dimensions.
    Index total() const noexcept {
        return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
    }

    /// Concatenation, the dims of a tensor product.
    TensorDims operator+(const TensorDims& other) const {
        std::vector<Index> d = dims_;
        d.insert(d.end(), other.dims_.begin(), other.dims_.end());
        return TensorDims(std::move(d));
    }

    friend bool operator==(const TensorDims&, const TensorDims&) = default;

private:
    void validate() const {
        for (Index d : dims_)
            if (d == 0) throw dimension_error("TensorDims: subsystem dimensions must be positive");
    }

    std::vector<Index> dims_;
};

namespace detail {

// Row-major digit expansion of a flat basis index.
inline void to_digits(Index flat, const TensorDims& dims, std::vector<Index>& digits) {
    digits.resize(dims.size());
    for (Index k = dims.size(); k-- > 0;) {
        digits[k] = flat % dims[k];
        flat /= dims[k];
    }
}

inline Index from_digits(const std::vector<Index>& digits, const TensorDims& dims) {
    Index flat = 0;
    for (Index k = 0; k < dims.size(); ++k) flat = flat * dims[k] + digits[k];
    return flat;
}

inline void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw dimension_error(std::string(who) + ": matrix must be square and non-empty");
}

inline void require_matches(const ComplexMatrix& m, const TensorDims& dims, const char* who) {
    require_square(m, who);
    if (static_cast<Index>(m.rows()) != dims.total()) {
        std::ostringstream os;
        os << who << ": matrix side " << m.rows() << " does not match product of dims " << dims.total();
        throw dimension_error(os.str());
    }
}

// Conjugation by a basis permutation: out(i, j) = m(src[i], src[j]).
inline ComplexMatrix permute_basis(const ComplexMatrix& m, const std::vector<Index>& src) {
    const auto n = static_cast<Eigen::Index>(src.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            out(i, j) = m(static_cast<Eigen::Index>(src[static_cast<Index>(i)]),
                          static_cast<Eigen::Index>(src[static_cast<Index>(j)]));
    return out;
}

} // namespace detail

/// Basis map of a subsystem permutation. New subsystem k is old subsystem
/// perm[k]; entry n of the result is the old flat index of new basis state n.
inline std::vector<Index> permutation_indices(const TensorDims& dims, const std::vector<Index>& perm) {
    if (perm.size() != dims.size())
        throw dimension_error("permutation_indices: permutation length differs from number of subsystems");
    std::vector<bool> seen(perm.size(), false);
    for (Index p : perm) {
        if (p >= perm.size() || seen[p]) throw dimension_error("permutation_indices: malformed permutation");
        seen[p] = true;
    }
    std::vector<Index> new_dims(perm.size());
    for (Index k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];
    const TensorDims nd(new_dims);

    std::vector<Index> src(dims.total());
    std::vector<Index> nd_digits, old_digits(dims.size());
    for (Index n = 0; n < src.size(); ++n) {
        detail::to_digits(n, nd, nd_digits);
        for (Index k = 0; k < perm.size(); ++k) old_digits[perm[k]] = nd_digits[k];
        src[n] = detail::from_digits(old_digits, dims);
    }
    return src;
}

/// Dims after applying permute_systems with the same permutation.
inline TensorDims permuted_dims(const TensorDims& dims, const std::vector<Index>& perm) {
    std::vector<Index> nd(perm.size());
    for (Index k = 0; k < perm.size(); ++k) nd[k] = dims[perm.at(k)];
    return TensorDims(nd);
}

// ------------------------------ products & traces ---------------------------

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Trace over every subsystem not listed in `keep`. Kept subsystems appear in
/// ascending index order in the result.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorDims& dims, std::vector<Index> keep) {
    detail::require_matches(m, dims, "partial_trace");
    if (keep.empty()) throw dimension_error("partial_trace: keep set must be non-empty");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw dimension_error("partial_trace: duplicate subsystem index in keep set");
    if (keep.back() >= dims.size()) throw dimension_error("partial_trace: subsystem index out of range");

    std::vector<Index> perm = keep;
    for (Index k = 0; k < dims.size(); ++k)
        if (!std::binary_search(keep.begin(), keep.end(), k)) perm.push_back(k);

    Index kept = 1;
    for (Index k : keep) kept *= dims[k];
    const Index traced = dims.total() / kept;

    const auto src = permutation_indices(dims, perm);
    const auto nk = static_cast<Eigen::Index>(kept);
    ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
    for (Eigen::Index j = 0; j < nk; ++j)
        for (Eigen::Index i = 0; i < nk; ++i) {
            Complex acc{0.0, 0.0};
            for (Index t = 0; t < traced; ++t)
                acc += m(static_cast<Eigen::Index>(src[static_cast<Index>(i) * traced + t]),
                         static_cast<Eigen::Index>(src[static_cast<Index>(j) * traced + t]));
            out(i, j) = acc;
        }
    return out;
}

/// Transpose on the indices of subsystem `which` only.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const TensorDims& dims, Index which) {
    detail::require_matches(m, dims, "partial_transpose");
    if (which >= dims.size()) throw dimension_error("partial_transpose: subsystem index out of range");
    Index stride = 1;
    for (Index k = which + 1; k < dims.size(); ++k) stride *= dims[k];
    const Index dw = dims[which];

    const auto n = m.rows();
    ComplexMatrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Index dj = (static_cast<Index>(j) / stride) % dw;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Index di = (static_cast<Index>(i) / stride) % dw;
            const auto ii = static_cast<Eigen::Index>(static_cast<Index>(i) - di * stride + dj * stride);
            const auto jj = static_cast<Eigen::Index>(static_cast<Index>(j) - dj * stride + di * stride);
            out(i, j) = m(ii, jj);
        }
    }
    return out;
}

/// Basis map of the transposition of subsystems i and j (an involution).
inline std::vector<Index> swap_indices(const TensorDims& dims, Index i, Index j) {
    if (i >= dims.size() || j >= dims.size()) throw dimension_error("swap_operator: subsystem index out of range");
    if (dims[i] != dims[j]) throw dimension_error("swap_operator: swapped subsystems must have equal dimension");
    std::vector<Index> perm(dims.size());
    std::iota(perm.begin(), perm.end(), Index{0});
    std::swap(perm[i], perm[j]);
    return permutation_indices(dims, perm);
}

/// Permutation unitary V exchanging subsystems i and j.
inline ComplexMatrix swap_operator(const TensorDims& dims, Index i, Index j) {
    const auto src = swap_indices(dims, i, j);
    const auto n = static_cast<Eigen::Index>(src.size());
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) v(k, static_cast<Eigen::Index>(src[static_cast<Index>(k)])) = 1.0;
    return v;
}

/// Reorder subsystems: new subsystem k is old subsystem perm[k].
inline ComplexMatrix permute_systems(const ComplexMatrix& m, const TensorDims& dims, const std::vector<Index>& perm) {
    detail::require_matches(m, dims, "permute_systems");
    return detail::permute_basis(m, permutation_indices(dims, perm));
}

// ------------------------------- norms --------------------------------------

inline double hs_norm(const ComplexMatrix& m) { return m.norm(); }

/// Hilbert–Schmidt inner product Tr(a† b).
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw dimension_error("hs_inner: shape mismatch");
    return (a.conjugate().cwiseProduct(b)).sum();
}

// ------------------------------ Hermitian spectra ---------------------------

inline constexpr double hermitian_tolerance = 1e-10;

/// Largest entry of the anti-Hermitian part, relative to the matrix scale.
inline double hermitian_skew(const ComplexMatrix& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return 0.5 * (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

/// (m + m†)/2, or invariant_error when the skew part exceeds tolerance.
inline ComplexMatrix hermitize(const ComplexMatrix& m, const char* who = "hermitize") {
    detail::require_square(m, who);
    if (!m.allFinite()) throw invariant_error(std::string(who) + ": matrix has non-finite entries");
    const double skew = hermitian_skew(m);
    if (skew > hermitian_tolerance)
        throw invariant_error(std::string(who) + ": " + detail::fmt_residual("matrix is not Hermitian", skew, hermitian_tolerance));
    return 0.5 * (m + m.adjoint());
}

struct HermitianEig {
    RealVector values;     // ascending
    ComplexMatrix vectors; // unitary, columns are eigenvectors

    ComplexMatrix reconstruct() const { return vectors * values.asDiagonal() * vectors.adjoint(); }

    template <typename F>
    ComplexMatrix apply(F&& f) const {
        RealVector mapped = values.unaryExpr(std::forward<F>(f));
        return vectors * mapped.asDiagonal() * vectors.adjoint();
    }
};

inline HermitianEig hermitian_eig(const ComplexMatrix& m) {
    const ComplexMatrix h = hermitize(m, "hermitian_eig");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    const ComplexMatrix h = hermitize(m, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: eigendecomposition failed");
    return solver.eigenvalues();
}

/// Frobenius-nearest positive semidefinite matrix.
inline ComplexMatrix psd_project(const ComplexMatrix& m) {
    return hermitian_eig(m).apply([](double x) { return std::max(x, 0.0); });
}

/// Base-2 logarithm with eigenvalues clamped below at `floor`.
inline ComplexMatrix matrix_log_floor(const ComplexMatrix& m, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("matrix_log_floor: floor must be positive");
    const auto eig = hermitian_eig(m);
    if (eig.values(0) < -1e-9)
        throw invariant_error(detail::fmt_residual("matrix_log_floor: matrix is not positive semidefinite", -eig.values(0), 1e-9));
    return eig.apply([floor](double x) { return std::log2(std::max(x, floor)); });
}

} // namespace symext
