#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "realmono/means.hpp"

using namespace realmono;
using rmtest::check_close;
using rmtest::mat1;
using rmtest::mat2;

TEST_CASE("principal_sqrt squares back and picks the right branch") {
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
        const int n = 1 + t % 6;
        CMatrix m = random_real_positive(n, rng);
        CMatrix s = principal_sqrt(m);
        REQUIRE(max_abs(s * s - m) <= 1e-9 * (1.0 + max_abs(m)));
        Eigen::ComplexEigenSolver<CMatrix> es(s);
        for (Eigen::Index i = 0; i < n; ++i) REQUIRE(es.eigenvalues()(i).real() > 0.0);
    }
    CHECK_THROWS_AS(principal_sqrt(mat1(-1.0)), DomainError);
    CHECK_THROWS_AS(principal_sqrt(mat2(-2.0, 0.0, 0.0, 3.0)), DomainError);
}

TEST_CASE("principal_sqrt agrees with the eigendecomposition route") {
    // Independent oracle: diagonalize, take scalar principal roots, undo.
    Rng rng(32);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + t % 5;
        CMatrix m = random_real_positive(n, rng);
        Eigen::ComplexEigenSolver<CMatrix> es(m);
        CMatrix v = es.eigenvectors();
        CVector d = es.eigenvalues();
        CMatrix droot = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) droot(i, i) = std::sqrt(d(i));
        CMatrix oracle = v * droot * safe_inverse(v);
        REQUIRE(max_abs(principal_sqrt(m) - oracle) <= 1e-8 * (1.0 + max_abs(oracle)));
    }
}

TEST_CASE("mean basics") {
    check_close(mean(MeanKind::geometric, identity(2), identity(2)), identity(2), 1e-13);
    check_close(mean(MeanKind::geometric, mat1(4.0), mat1(9.0)), mat1(6.0), 1e-12);
    check_close(mean(MeanKind::harmonic, mat1(4.0), mat1(9.0)), mat1(72.0 / 13.0), 1e-12);
    check_close(mean(MeanKind::arithmetic, mat1(4.0), mat1(9.0)), mat1(6.5));

    CHECK_THROWS_AS(mean(MeanKind::geometric, mat1(0.0), mat1(1.0)), DomainError);
    CHECK_THROWS_AS(mean(MeanKind::harmonic, mat1(Complex(0, 2)), mat1(1.0)), DomainError);
    CHECK_THROWS_AS(mean(MeanKind::arithmetic, identity(2), identity(3)), DimensionError);
}

TEST_CASE("scalar consistency of the three means") {
    Rng rng(44);
    for (int t = 0; t < 50; ++t) {
        const double a = 0.1 + 4.0 * rng.uniform(), b = 0.1 + 4.0 * rng.uniform();
        CHECK(std::abs(mean(MeanKind::geometric, mat1(a), mat1(b))(0, 0).real() - std::sqrt(a * b)) <=
              1e-14 * (1.0 + std::sqrt(a * b)));
        CHECK(std::abs(mean(MeanKind::harmonic, mat1(a), mat1(b))(0, 0).real() - 2.0 * a * b / (a + b)) <=
              1e-14 * (1.0 + a + b));
        CHECK(std::abs(mean(MeanKind::arithmetic, mat1(a), mat1(b))(0, 0).real() - (a + b) / 2.0) <=
              1e-14 * (1.0 + a + b));
    }
}

TEST_CASE("geometric mean of Hermitian PD pairs is Hermitian PD and unitary-covariant") {
    for (int t = 0; t < 60; ++t) {
        Rng rng(mix_seed(71, 0, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 4;
        CMatrix a = random_psd(n, rng, 0.1), b = random_psd(n, rng, 0.1);
        CMatrix g = mean(MeanKind::geometric, a, b);
        REQUIRE(max_abs(g - g.adjoint()) <= 1e-10 * (1.0 + spectral_norm(g)));
        REQUIRE(hermitian_eigenvalues((g + g.adjoint()) / 2.0).minCoeff() > 0.0);

        CMatrix u = random_unitary(n, rng);
        CMatrix lhs = u.adjoint() * g * u;
        CMatrix rhs = mean(MeanKind::geometric, u.adjoint() * a * u, u.adjoint() * b * u);
        REQUIRE(max_abs(lhs - rhs) <= 1e-9 * (1.0 + max_abs(rhs)));
    }
}

TEST_CASE("geometric mean restricted to Hermitian PD pairs preserves order") {
    for (int t = 0; t < 1000; ++t) {
        Rng rng(mix_seed(72, 0, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 4;
        CMatrix a1 = random_psd(n, rng, 0.05), b1 = random_psd(n, rng, 0.05);
        CMatrix a2 = a1 + random_psd(n, rng), b2 = b1 + random_psd(n, rng);
        CMatrix g1 = mean(MeanKind::geometric, a1, b1);
        CMatrix g2 = mean(MeanKind::geometric, a2, b2);
        REQUIRE(real_leq(g1, g2).holds);
    }
}

TEST_CASE("max characterization at simple points") {
    MaxCharReport r1 = verify_max_characterization(identity(2), identity(2), identity(2));
    CHECK(r1.feasible);
    CHECK(r1.feasible_margin == Catch::Approx(0.0).margin(1e-12));
    CHECK(r1.inflated_infeasible);

    const double s2 = std::sqrt(2.0);
    CMatrix a = mat2(2.0, 0.0, 0.0, 1.0), b = mat2(1.0, 0.0, 0.0, 2.0);
    CMatrix g = mat2(s2, 0.0, 0.0, s2);
    MaxCharReport r2 = verify_max_characterization(a, b, g);
    CHECK(r2.feasible);
    CHECK(r2.inflated_infeasible);

    CHECK_THROWS_AS(verify_max_characterization(mat1(-1.0), mat1(1.0), mat1(1.0)), DomainError);
}

TEST_CASE("formula result passes the max characterization on random PD pairs") {
    for (int t = 0; t < 100; ++t) {
        Rng rng(mix_seed(73, 0, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 4;
        CMatrix a = random_psd(n, rng, 0.1), b = random_psd(n, rng, 0.1);
        CMatrix g = mean(MeanKind::geometric, a, b);
        MaxCharReport r = verify_max_characterization(a, b, g, 1e-3, 1e-8);
        REQUIRE(r.feasible);
        REQUIRE(r.inflated_infeasible);
    }
}

TEST_CASE("agh probe on Hermitian inputs") {
    AghReport eq = agh_probe(identity(2), identity(2));
    CHECK(eq.hermitian_inputs);
    check_close(eq.harmonic, identity(2), 1e-12);
    check_close(eq.geometric, identity(2), 1e-12);
    check_close(eq.arithmetic, identity(2));
    CHECK(eq.all_hold());

    AghReport sc = agh_probe(mat1(1.0), mat1(4.0));
    check_close(sc.harmonic, mat1(1.6), 1e-13);
    check_close(sc.geometric, mat1(2.0), 1e-13);
    check_close(sc.arithmetic, mat1(2.5));
    CHECK(sc.all_hold());

    for (int t = 0; t < 200; ++t) {
        Rng rng(mix_seed(74, 0, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 4;
        AghReport r = agh_probe(random_psd(n, rng, 0.1), random_psd(n, rng, 0.1));
        REQUIRE(r.all_hold());
    }
}

TEST_CASE("agh inequalities fail for non-Hermitian real positive pairs") {
    long found_at = -1;
    for (long t = 0; t < 10000 && found_at < 0; ++t) {
        Rng rng(mix_seed(75, 0, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 2;
        CMatrix a = random_real_positive(n, rng), b = random_real_positive(n, rng);
        AghReport r = agh_probe(a, b);
        if (!r.all_hold()) found_at = t;
    }
    INFO("first AGH failure at trial " << found_at);
    REQUIRE(found_at >= 0);
}
