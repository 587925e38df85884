#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "realmono/choi.hpp"

using namespace realmono;

namespace {
// Phase-invariant distance between matrices expected to agree up to a
// global unimodular factor.
double dist_up_to_phase(const CMatrix& a, const CMatrix& b) {
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    Complex phase = a(r, c) / b(r, c);
    phase /= std::abs(phase);
    return max_abs(a - phase * b);
}
} // namespace

TEST_CASE("choi of the identity map is the unnormalized entangled projector") {
    ChoiMatrix c = choi_of_linear_map(identity_map(2), 2);
    CHECK(c.hermiticity_preserving);
    RVector ev = hermitian_eigenvalues(c.matrix);
    // rank one with eigenvalue n = 2
    CHECK(ev(3) == Catch::Approx(2.0).margin(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(ev(i)) <= 1e-12);

    CpResult cp = is_cp(c);
    CHECK(cp.verdict.holds);
    REQUIRE(cp.kraus.size() == 1);
    CHECK(dist_up_to_phase(identity(2), cp.kraus[0]) <= 1e-10);
    CHECK(cp.reconstruction_residual <= 1e-12);
}

TEST_CASE("transpose is not completely positive: swap eigenvalue -1") {
    ChoiMatrix c = choi_of_linear_map(transpose_map(2), 2);
    CHECK(c.hermiticity_preserving);
    CpResult cp = is_cp(c);
    CHECK_FALSE(cp.verdict.holds);
    CHECK(cp.verdict.margin == Catch::Approx(-1.0).margin(1e-10));
    REQUIRE(cp.verdict.witness_vector.has_value());
}

TEST_CASE("conjugation maps recover a single Kraus factor up to phase") {
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + t % 3;
        CMatrix v = ginibre(n, n, rng);
        LinearMap l = kraus_map(n, {v});
        ChoiMatrix c = choi_of_linear_map(l, n);
        CpResult cp = is_cp(c);
        REQUIRE(cp.verdict.holds);
        REQUIRE(cp.kraus.size() == 1);
        // l(X) = V* X V = K X K^+ with K = V*
        REQUIRE(dist_up_to_phase(v.adjoint(), cp.kraus[0]) <= 1e-9 * (1.0 + max_abs(v)));
        REQUIRE(cp.reconstruction_residual <= 1e-9);
    }
}

TEST_CASE("multi-factor Kraus maps reconstruct within 1e-9") {
    Rng rng(43);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + t % 2, rank = 1 + t % 3;
        std::vector<CMatrix> vs;
        for (int i = 0; i < rank; ++i) vs.push_back(ginibre(n, n, rng));
        ChoiMatrix c = choi_of_linear_map(kraus_map(n, vs), n);
        CpResult cp = is_cp(c);
        REQUIRE(cp.verdict.holds);
        REQUIRE(static_cast<int>(cp.kraus.size()) <= n * n);
        REQUIRE(cp.reconstruction_residual <= 1e-9);

        // rebuilt action agrees with the original map on random inputs
        CMatrix x = ginibre(n, n, rng);
        CMatrix orig = kraus_map(n, vs).apply(x);
        CMatrix rebuilt = CMatrix::Zero(n, n);
        for (const auto& k : cp.kraus) rebuilt += k * x * k.adjoint();
        REQUIRE(max_abs(orig - rebuilt) <= 1e-9 * (1.0 + max_abs(orig)));
    }
}

TEST_CASE("real-linear maps are rejected by the linearity gate") {
    CHECK_THROWS_AS(choi_of_linear_map(hermitian_part_pseudomap(2), 2), ContractError);
}

TEST_CASE("is_cp agrees with amplified positivity") {
    Rng rng(47);
    const int n = 2;
    std::vector<LinearMap> maps;
    maps.push_back(identity_map(n));
    maps.push_back(transpose_map(n));
    maps.push_back(kraus_map(n, {ginibre(n, n, rng), ginibre(n, n, rng)}));
    {
        // Hermiticity-preserving but indefinite combination
        CMatrix v1 = ginibre(n, n, rng), v2 = ginibre(n, n, rng);
        maps.push_back({"indefinite", n, [v1, v2](const CMatrix& x) {
                            return (v1.adjoint() * x * v1 - v2.adjoint() * x * v2).eval();
                        }});
    }

    for (const auto& l : maps) {
        ChoiMatrix c = choi_of_linear_map(l, n);
        CpResult cp = is_cp(c);

        bool positive_on_samples = true;
        for (int m = 2; m <= 4 && positive_on_samples; ++m) {
            for (int t = 0; t < 20 && positive_on_samples; ++t) {
                CMatrix p = random_psd(m * n, rng);
                CMatrix img = amplified_apply(l, m, p);
                positive_on_samples =
                    hermitian_eigenvalues((img + img.adjoint()) / 2.0).minCoeff() >= -1e-9;
            }
        }
        // the Choi matrix itself is (id_n (x) L) of the entangled projector
        if (positive_on_samples)
            positive_on_samples = hermitian_eigenvalues(c.matrix).minCoeff() >= -default_psd_tol(c.matrix);

        INFO(l.name);
        REQUIRE(cp.verdict.holds == positive_on_samples);
    }
}
