#include "catch_amalgamated.hpp"

#include "symext/constructions.hpp"
#include "symext/quantum.hpp"
#include "symext/random.hpp"

#include <cmath>
#include <limits>

using namespace symext;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
    RealVector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d(i++) = x;
    return d.cast<Complex>().asDiagonal();
}

DensityMatrix basis_state(Index n, Index i) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    return DensityMatrix(m);
}

} // namespace

TEST_CASE("density matrix invariants", "[quantum][state]") {
    CHECK_NOTHROW(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, TensorDims{2, 2}));
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Identity(4, 4) / 2.0, TensorDims{2, 2}), invariant_error);
    CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), invariant_error);
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, TensorDims{2, 3}), dimension_error);
    ComplexMatrix skew = diag({0.5, 0.5});
    skew(0, 1) = Complex(0.0, 1e-3);
    CHECK_THROWS_AS(DensityMatrix(skew), invariant_error);
}

TEST_CASE("Choi states of standard channels", "[quantum][choi]") {
    const auto choi_id = choi_from_kraus(identity_channel(2));
    CHECK(hs_norm(choi_id.state().matrix() - max_entangled_projector(2)) <= 1e-15);
    CHECK_THAT(choi_id.state().matrix()(0, 3).real(), WithinAbs(0.5, 1e-15));

    const auto choi_full = choi_from_kraus(depolarizing_channel(2, 1.0));
    CHECK(hs_norm(choi_full.state().matrix() - ComplexMatrix::Identity(4, 4) / 4.0) <= 1e-12);

    for (double p : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.8}) {
        const auto c = choi_from_kraus(depolarizing_channel(2, p));
        CHECK(hs_norm(c.state().matrix() - isotropic(2, 1.0 - 0.75 * p).matrix()) <= 1e-12);
    }
    CHECK(hs_norm(choi_from_kraus(depolarizing_channel(2, 1.0 / 3.0)).state().matrix() - isotropic(2, 0.75).matrix()) <= 1e-12);
}

TEST_CASE("depolarizing channel", "[quantum][channel]") {
    const auto zero = depolarizing_channel(3, 0.0);
    random::Rng rng(2);
    const auto rho = random::random_mixed(TensorDims{3}, 3, rng);
    CHECK(hs_norm(apply_channel(zero, rho).matrix() - rho.matrix()) <= 1e-12);

    const auto half = apply_channel(depolarizing_channel(2, 0.5), basis_state(2, 0));
    CHECK(hs_norm(half.matrix() - diag({0.75, 0.25})) <= 1e-12);

    const auto full = apply_channel(depolarizing_channel(2, 1.0), random::random_pure(TensorDims{2}, rng));
    CHECK(hs_norm(full.matrix() - ComplexMatrix::Identity(2, 2) / 2.0) <= 1e-12);

    CHECK_THROWS_AS(depolarizing_channel(2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(depolarizing_channel(1, 0.5), std::invalid_argument);
}

TEST_CASE("channel application", "[quantum][channel]") {
    random::Rng rng(7);
    const auto rho = random::random_mixed(TensorDims{3}, 2, rng);
    CHECK(hs_norm(apply_channel(identity_channel(3), rho).matrix() - rho.matrix()) <= 1e-15);
    const auto ch = random::random_channel(3, 2, 3, rng);
    CHECK_THAT(apply_channel(ch, rho).matrix().trace().real(), WithinAbs(1.0, 1e-10));
    CHECK_THROWS_AS(apply_channel(random::random_channel(2, 2, 1, rng), rho), dimension_error);

    const auto ab = random::random_mixed(TensorDims{2, 3}, 6, rng);
    const auto mapped = apply_channel_to(ch, ab, 1);
    CHECK(mapped.dims() == TensorDims{2, 2});
    CHECK(hs_norm(partial_trace(mapped.matrix(), mapped.dims(), {0}) - partial_trace(ab.matrix(), ab.dims(), {0})) <= 1e-12);

    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 0) = 1.1;
    CHECK_THROWS_AS(KrausChannel(2, 2, {bad}), invariant_error);
}

TEST_CASE("Kraus operators from Choi states", "[quantum][choi]") {
    const auto k_id = kraus_from_choi(choi_from_kraus(identity_channel(2)));
    REQUIRE(k_id.kraus().size() == 1);
    const ComplexMatrix k = k_id.kraus()[0];
    const Complex phase = k(0, 0);
    CHECK_THAT(std::abs(phase), WithinAbs(1.0, 1e-12));
    CHECK(hs_norm(k / phase - ComplexMatrix::Identity(2, 2)) <= 1e-12);

    const auto full = kraus_from_choi(ChoiState(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, TensorDims{2, 2})));
    REQUIRE(full.kraus().size() == 4);
    for (const auto& op : full.kraus()) CHECK_THAT(hs_norm(op) * hs_norm(op), WithinAbs(0.5, 1e-12));
    CHECK(hs_norm(choi_from_kraus(full).state().matrix() - ComplexMatrix::Identity(4, 4) / 4.0) <= 1e-12);

    CHECK_THROWS_AS(ChoiState(DensityMatrix(diag({1, 0, 0, 0}), TensorDims{2, 2})), invariant_error);
}

TEST_CASE("Choi round trip on random channels", "[quantum][choi][property]") {
    random::Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Index din = 2 + trial % 2, dout = 2 + (trial / 2) % 2;
        const auto ch = random::random_channel(din, dout, 1 + trial % 4, rng);
        const auto c1 = choi_from_kraus(ch);
        const ComplexMatrix marginal = partial_trace(c1.state().matrix(), c1.state().dims(), {0});
        CHECK(hs_norm(marginal - ComplexMatrix::Identity(static_cast<Eigen::Index>(din), static_cast<Eigen::Index>(din)) /
                                     static_cast<double>(din)) <= 1e-9);
        const auto c2 = choi_from_kraus(kraus_from_choi(c1));
        CHECK(hs_norm(c2.state().matrix() - c1.state().matrix()) <= 1e-8);
    }
}

TEST_CASE("von Neumann entropy", "[quantum][entropy]") {
    random::Rng rng(19);
    CHECK_THAT(von_neumann_entropy(random::random_pure(TensorDims{2, 3}, rng)), WithinAbs(0.0, 1e-10));
    CHECK_THAT(von_neumann_entropy(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, TensorDims{2, 2})),
               WithinAbs(2.0, 1e-12));
    CHECK_THAT(von_neumann_entropy(example_state(0.5)), WithinAbs(0.5 + 0.5 * std::log2(6.0), 1e-10));
}

TEST_CASE("relative entropy", "[quantum][entropy]") {
    random::Rng rng(23);
    const auto rho = random::random_mixed(TensorDims{2, 2}, 4, rng);
    CHECK_THAT(relative_entropy(rho, rho), WithinAbs(0.0, 1e-10));
    CHECK_THAT(relative_entropy(max_entangled_state(2), isotropic(2, 0.75)), WithinAbs(-std::log2(0.75), 1e-10));
    CHECK(std::isinf(relative_entropy(basis_state(2, 0), basis_state(2, 1))));
    CHECK_THROWS_AS(relative_entropy(rho, basis_state(2, 0)), dimension_error);
}

TEST_CASE("relative entropy is nonnegative and additive", "[quantum][entropy][property]") {
    random::Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r1 = random::random_mixed(TensorDims{2}, 2, rng), s1 = random::random_mixed(TensorDims{2}, 2, rng);
        const auto r2 = random::random_mixed(TensorDims{3}, 3, rng), s2 = random::random_mixed(TensorDims{3}, 3, rng);
        const double a = relative_entropy(r1, s1), b = relative_entropy(r2, s2);
        CHECK(a >= 0.0);
        CHECK(a > 1e-10);
        CHECK_THAT(relative_entropy(tensor(r1, r2), tensor(s1, s2)), WithinAbs(a + b, 1e-8));
    }
}

TEST_CASE("coherent information", "[quantum][entropy]") {
    CHECK_THAT(coherent_information(max_entangled_state(2)), WithinAbs(1.0, 1e-10));
    CHECK_THAT(coherent_information(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, TensorDims{2, 2})),
               WithinAbs(-1.0, 1e-12));
    // ρ_B spectrum (1/3, (2−F)/3, F/3) at F = 1/2.
    const double f = 0.5;
    const double sb = -(1.0 / 3.0) * std::log2(1.0 / 3.0) - ((2.0 - f) / 3.0) * std::log2((2.0 - f) / 3.0) -
                      (f / 3.0) * std::log2(f / 3.0);
    const double sab = 0.5 + 0.5 * std::log2(6.0);
    CHECK_THAT(coherent_information(example_state(0.5)), WithinAbs(sb - sab, 1e-10));
    CHECK(coherent_information(example_state(0.5)) < 0.0);
    CHECK_THROWS_AS(coherent_information(basis_state(2, 0)), dimension_error);
}

TEST_CASE("fidelity with the maximally entangled state", "[quantum][fidelity]") {
    CHECK_THAT(fidelity_maxent(max_entangled_state(3)), WithinAbs(1.0, 1e-14));
    for (double f : {0.1, 0.5, 0.9}) CHECK_THAT(fidelity_maxent(isotropic(3, f)), WithinAbs(f, 1e-14));
    CHECK_THAT(fidelity_maxent(upsilon(3)), WithinAbs(0.6, 1e-14));
    CHECK_THROWS_AS(fidelity_maxent(DensityMatrix(ComplexMatrix::Identity(6, 6) / 6.0, TensorDims{2, 3})),
                    dimension_error);
}

TEST_CASE("negativity", "[quantum][negativity]") {
    random::Rng rng(37);
    const auto product = tensor(random::random_pure(TensorDims{2}, rng), random::random_pure(TensorDims{3}, rng));
    CHECK_THAT(negativity(product), WithinAbs(0.0, 1e-12));
    CHECK_THAT(negativity(max_entangled_state(2)), WithinAbs(0.5, 1e-12));
    CHECK(negativity(example_state(0.5)) > 0.0);
}

TEST_CASE("embedding into a square space", "[quantum][embed]") {
    const auto sq = max_entangled_state(2);
    CHECK(hs_norm(embed_square(sq).matrix() - sq.matrix()) == 0.0);

    // |Φ₂> on 2 ⊗ 3: (|00> + |11>)/√2.
    ComplexVector v = ComplexVector::Zero(6);
    v(0) = v(4) = 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::pure(v, TensorDims{2, 3});
    const auto emb = embed_square(rho);
    CHECK(emb.dims() == TensorDims{3, 3});
    CHECK_THAT(emb.matrix().trace().real(), WithinAbs(1.0, 1e-15));
    const RealVector a = hermitian_eigenvalues(rho.matrix()), b = hermitian_eigenvalues(emb.matrix());
    CHECK_THAT(a.maxCoeff(), WithinAbs(b.maxCoeff(), 1e-14));

    // Brute force: padded vector in the 3 ⊗ 3 basis, overlap with Σ|ii>/√3.
    ComplexVector padded = ComplexVector::Zero(9);
    padded(0) = padded(4) = 1.0 / std::sqrt(2.0);
    const ComplexVector phi3 = max_entangled_vector(3) / std::sqrt(3.0);
    const double direct = std::norm(phi3.dot(padded));
    CHECK_THAT(fidelity_maxent(emb), WithinAbs(direct, 1e-14));
    CHECK_THAT(direct, WithinAbs(2.0 / 3.0, 1e-14));
}

TEST_CASE("isotropic twirl", "[quantum][twirl]") {
    const auto iso = isotropic(3, 0.4);
    CHECK(hs_norm(twirl_isotropic(iso).matrix() - iso.matrix()) <= 1e-12);
    CHECK(hs_norm(twirl_isotropic(max_entangled_state(2)).matrix() - max_entangled_projector(2)) <= 1e-12);
    CHECK(hs_norm(twirl_isotropic(example_state(0.5)).matrix() - isotropic(3, 0.5).matrix()) <= 1e-12);

    random::Rng rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        const auto rho = random::random_mixed(TensorDims{3, 3}, 4, rng);
        const auto tw = twirl_isotropic(rho);
        CHECK_THAT(fidelity_maxent(tw), WithinAbs(fidelity_maxent(rho), 1e-12));
        const ComplexMatrix u = random::haar_unitary(3, rng);
        const ComplexMatrix uu = kron(u, u.conjugate());
        const DensityMatrix rotated(uu * rho.matrix() * uu.adjoint(), rho.dims());
        CHECK(hs_norm(twirl_isotropic(rotated).matrix() - tw.matrix()) <= 1e-10);
    }
}
