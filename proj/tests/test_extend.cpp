#include "catch_amalgamated.hpp"

#include "symext/boundary.hpp"
#include "symext/constructions.hpp"
#include "symext/extend.hpp"
#include "symext/random.hpp"

#include <algorithm>
#include <cmath>

using namespace symext;

namespace {

void check_sound(const ExtensionCertificate& cert, const DensityMatrix& target, double tol) {
    REQUIRE(cert.verdict == Verdict::Feasible);
    CHECK(cert.psd_residual <= tol);
    CHECK(cert.swap_residual <= tol);
    CHECK(cert.pt_residual <= tol);
    const auto r = verify_certificate(cert.candidate, target);
    CHECK(r.psd_residual <= tol);
    CHECK(r.swap_residual <= tol);
    CHECK(r.pt_residual <= tol);
}

} // namespace

TEST_CASE("product states are extendible", "[extend]") {
    random::Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        const Index da = 2 + trial % 2, db = 2 + (trial / 2) % 2;
        const auto ra = random::random_mixed(TensorDims{da}, da, rng);
        const auto rb = random::random_mixed(TensorDims{db}, 1 + trial % db, rng);
        const DensityMatrix rho(kron(ra.matrix(), rb.matrix()), TensorDims{da, db});
        check_sound(solve_extension({rho}), rho, 1e-7);
    }
}

TEST_CASE("qutrit example family below one half is extendible", "[extend]") {
    for (double f : {0.1, 0.4, 0.45, 0.5}) {
        const auto rho = example_state(f);
        check_sound(solve_extension({rho}), rho, 1e-7);
    }
}

TEST_CASE("isotropic states beyond the boundary are not extendible", "[extend]") {
    const auto cert = solve_extension({isotropic(2, 0.80)});
    CHECK(cert.verdict == Verdict::InfeasibleNumerical);
    CHECK(cert.combined_residual() >= 1e-6);
    CHECK(solve_extension({max_entangled_state(2)}).verdict == Verdict::InfeasibleNumerical);
}

TEST_CASE("boundary consistency around the isotropic threshold", "[extend][boundary]") {
    for (Index d : {2, 3}) {
        CHECK(solve_extension({isotropic(d, f_max(d) - 0.02)}).verdict == Verdict::Feasible);
        CHECK(solve_extension({isotropic(d, f_max(d) + 0.02)}).verdict == Verdict::InfeasibleNumerical);
    }
}

TEST_CASE("verification path on analytic extensions", "[extend][verify]") {
    const auto rho = example_state(0.3);
    const auto r = verify_certificate(example_extension({0.3, std::nullopt}), rho);
    CHECK(r.psd_residual <= 1e-12);
    CHECK(r.swap_residual <= 1e-12);
    CHECK(r.pt_residual <= 1e-12);

    const auto w = verify_certificate(omega_extension(2), isotropic(2, 0.75));
    CHECK(w.psd_residual <= 1e-10);
    CHECK(w.swap_residual <= 1e-10);
    CHECK(w.pt_residual <= 1e-10);

    // The starting point ρ ⊗ I/d_B is generally not swap-invariant.
    const auto ent = isotropic(2, 0.9);
    const auto naive = verify_certificate(kron(ent.matrix(), ComplexMatrix::Identity(2, 2) / 2.0), ent);
    CHECK(naive.swap_residual > 1e-3);
    CHECK(naive.pt_residual <= 1e-15);
}

TEST_CASE("solver input validation", "[extend]") {
    CHECK_THROWS_AS(solve_extension({DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0)}), dimension_error);
    CHECK_THROWS_AS(solve_extension({isotropic(2, 0.5), -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_extension({isotropic(2, 0.5), 1e-7, 0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_extension({DensityMatrix::maximally_mixed(TensorDims{11, 11})}), dimension_error);
    CHECK_THROWS_AS(verify_certificate(ComplexMatrix::Identity(4, 4), isotropic(2, 0.5)), dimension_error);
}

TEST_CASE("residual history is monotone up to jitter", "[extend][property]") {
    random::Rng rng(103);
    std::vector<DensityMatrix> targets{isotropic(2, 0.77), isotropic(3, 0.70), example_state(0.45)};
    for (int k = 0; k < 3; ++k) targets.push_back(random::random_mixed(TensorDims{2, 2}, 4, rng));
    for (const auto& t : targets) {
        ExtensionProblem p{t};
        p.log_every = 10;
        const auto cert = solve_extension(p);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : cert.history) {
            if (s.iteration <= 100) continue;
            CHECK(s.combined <= 1.05 * best);
            best = std::min(best, s.combined);
        }
    }
}

TEST_CASE("solver is deterministic", "[extend][property]") {
    for (const auto& t : {isotropic(3, 0.6), example_state(0.45), isotropic(2, 0.8)}) {
        const auto a = solve_extension({t});
        const auto b = solve_extension({t});
        CHECK(a.verdict == b.verdict);
        CHECK(a.iterations == b.iterations);
        CHECK(a.candidate == b.candidate);
        CHECK(a.psd_residual == b.psd_residual);
        CHECK(a.swap_residual == b.swap_residual);
        CHECK(a.pt_residual == b.pt_residual);
    }
}

TEST_CASE("separable and entangled pure batteries", "[extend][battery]") {
    random::Rng rng(107);
    for (int k = 0; k < 30; ++k) {
        const Index d = k % 2 ? 3 : 2;
        const auto rho = random::random_separable(d, d, 1 + static_cast<Index>(k) % (d * d), rng);
        check_sound(solve_extension({rho}), rho, 1e-7);
    }
    for (int k = 0; k < 30; ++k) {
        const Index d = k % 2 ? 3 : 2;
        CHECK(solve_extension({random::random_entangled_pure(d, d, rng)}).verdict != Verdict::Feasible);
    }
}

TEST_CASE("channel test", "[extend][channel]") {
    const auto half = test_channel(depolarizing_channel(2, 0.5));
    CHECK(half.certificate.verdict == Verdict::Feasible);
    CHECK(half.capacity_zero_certified);
    CHECK(half.conclusion.find("one-way capacity Q-> = 0") != std::string::npos);

    const auto id = test_channel(identity_channel(2));
    CHECK(id.certificate.verdict == Verdict::InfeasibleNumerical);
    CHECK_FALSE(id.capacity_zero_certified);
    CHECK(id.conclusion == "test inconclusive for capacity");

    CHECK(test_channel(depolarizing_channel(2, 0.1)).certificate.verdict == Verdict::InfeasibleNumerical);
}

TEST_CASE("Bob-side channels preserve extendibility", "[extend][closure]") {
    // Qutrit channel that depolarizes the qubit block {0, 1} and leaves |2> alone.
    const auto dep = depolarizing_channel(2, 0.5);
    std::vector<ComplexMatrix> kraus;
    for (const auto& k : dep.kraus()) {
        ComplexMatrix big = ComplexMatrix::Zero(3, 3);
        big.topLeftCorner(2, 2) = k;
        kraus.push_back(big);
    }
    ComplexMatrix keep = ComplexMatrix::Zero(3, 3);
    keep(2, 2) = 1.0;
    kraus.push_back(keep);
    const KrausChannel embedded(3, 3, kraus);

    CHECK(bob_side_map_preserves(example_state(0.4), embedded).preserved);
    CHECK(bob_side_map_preserves(isotropic(3, 0.6), identity_channel(3)).preserved);
    CHECK(solve_extension({filtered_state(0.4)}).verdict == Verdict::Feasible);
    CHECK_THROWS_AS(bob_side_map_preserves(max_entangled_state(2), identity_channel(2)), std::invalid_argument);

    random::Rng rng(109);
    for (int k = 0; k < 5; ++k) {
        const auto rho = random::random_extendible(2, 2, 3, rng);
        CHECK(bob_side_map_preserves(rho, random::random_channel(2, 2, 2, rng)).preserved);
    }
}

TEST_CASE("isotropic sweeps and bisection", "[extend][boundary]") {
    const auto sweep = sweep_isotropic(2, 0.6, 0.9, 31);
    REQUIRE(sweep.rows.size() == 31);
    REQUIRE(sweep.boundary.has_value());
    CHECK(std::abs(*sweep.boundary - 0.75) <= 0.01);
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) CHECK(sweep.rows[i - 1].F < sweep.rows[i].F);

    const auto par = sweep_isotropic(2, 0.6, 0.9, 31, {1e-7, 20000, true});
    REQUIRE(par.rows.size() == sweep.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        CHECK(par.rows[i].F == sweep.rows[i].F);
        CHECK(par.rows[i].verdict == sweep.rows[i].verdict);
        CHECK(par.rows[i].iterations == sweep.rows[i].iterations);
    }

    const auto single = sweep_isotropic(3, 0.5, 0.5, 1);
    CHECK(single.rows.size() == 1);
    CHECK_FALSE(single.boundary.has_value());

    CHECK_THROWS_AS(sweep_isotropic(5, 0.5, 0.8, 3), std::invalid_argument);
    CHECK_THROWS_AS(sweep_isotropic(2, 0.8, 0.5, 3), std::invalid_argument);

    CHECK(std::abs(max_extendible_fidelity(2) - 0.75) <= 5e-3);
    CHECK(std::abs(max_extendible_fidelity(3) - 2.0 / 3.0) <= 5e-3);
    CHECK(std::abs(max_extendible_fidelity(4) - 0.625) <= 5e-3);
}
