// random.hpp: Seeded generators for states, unitaries and channels.

#pragma once

#include "symext/linalg.hpp"
#include "symext/quantum.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace symext::random {

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(n01(rng), n01(rng));
    return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal divided out.
inline ComplexMatrix haar_unitary(Index d, Rng& rng) {
    const ComplexMatrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex rk = r(k, k);
        if (std::abs(rk) > 0.0) q.col(k) *= rk / std::abs(rk);
    }
    return q;
}

inline ComplexVector haar_vector(Index n, Rng& rng) {
    ComplexVector v = ginibre(n, 1, rng).col(0);
    return v / v.norm();
}

inline DensityMatrix random_pure(const TensorDims& dims, Rng& rng) {
    return DensityMatrix::pure(haar_vector(dims.total(), rng), dims);
}

/// Mixed state with Hilbert–Schmidt-type measure of the given rank.
inline DensityMatrix random_mixed(const TensorDims& dims, Index rank, Rng& rng) {
    const ComplexMatrix g = ginibre(dims.total(), rank, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix(m, dims);
}

inline ComplexMatrix random_product_pure(Index da, Index db, Rng& rng) {
    const ComplexVector v = kron(haar_vector(da, rng), haar_vector(db, rng));
    return v * v.adjoint();
}

/// Convex mixture of `count` random pure product states.
inline DensityMatrix random_separable(Index da, Index db, Index count, Rng& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const auto n = static_cast<Eigen::Index>(da * db);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    double total = 0.0;
    for (Index k = 0; k < count; ++k) {
        const double w = u(rng);
        total += w;
        m += w * random_product_pure(da, db, rng);
    }
    return DensityMatrix(m / total, TensorDims{da, db});
}

/// Haar pure state on da ⊗ db whose second Schmidt coefficient is at least
/// `min_second` (resampled otherwise), so it is entangled.
inline DensityMatrix random_entangled_pure(Index da, Index db, Rng& rng, double min_second = 1e-2) {
    for (;;) {
        const ComplexVector v = haar_vector(da * db, rng);
        const ComplexMatrix coeffs = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            v.data(), static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
        Eigen::JacobiSVD<ComplexMatrix> svd(coeffs);
        const auto& s = svd.singularValues();
        if (s.size() >= 2 && s(1) * s(1) >= min_second) return DensityMatrix::pure(v, TensorDims{da, db});
    }
}

/// B′-marginal of a random swap-symmetric PSD matrix on A ⊗ B ⊗ B′; extendible
/// by construction.
inline DensityMatrix random_extendible(Index da, Index db, Index rank, Rng& rng) {
    const TensorDims dims{da, db, db};
    const ComplexMatrix g = ginibre(dims.total(), rank, rng);
    const auto swap_src = swap_indices(dims, 1, 2);
    ComplexMatrix x = g * g.adjoint();
    x = 0.5 * (x + detail::permute_basis(x, swap_src));
    x /= x.trace().real();
    return DensityMatrix(partial_trace(x, dims, {0, 1}), TensorDims{da, db});
}

/// Random CPTP map from a Haar-like isometry d_in → d_out · n_kraus.
inline KrausChannel random_channel(Index d_in, Index d_out, Index n_kraus, Rng& rng) {
    const ComplexMatrix g = ginibre(d_out * n_kraus, d_in, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(static_cast<Eigen::Index>(d_in));
    std::vector<ComplexMatrix> kraus;
    for (Index k = 0; k < n_kraus; ++k)
        kraus.push_back(q.middleRows(static_cast<Eigen::Index>(k * d_out), static_cast<Eigen::Index>(d_out)));
    return KrausChannel(d_in, d_out, std::move(kraus));
}

/// Random Hermitian matrix with unit Frobenius norm.
inline ComplexMatrix random_hermitian(Index n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    ComplexMatrix h = 0.5 * (g + g.adjoint());
    return h / h.norm();
}

} // namespace symext::random
