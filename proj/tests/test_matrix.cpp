#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "realmono/matrix.hpp"
#include "realmono/sampling.hpp"

using namespace realmono;
using rmtest::check_close;
using rmtest::mat1;
using rmtest::mat2;

TEST_CASE("re_part basics") {
    check_close(re_part(mat1(Complex(0, 1))), mat1(0.0));

    CMatrix h = mat2(3.0, Complex(1, 1), Complex(1, -1), 2.0);
    check_close(re_part(h), h);

    CMatrix x = mat2(Complex(1, 2), 3.0, -1.0, 4.0);
    check_close(re_part(x), mat2(1.0, 1.0, 1.0, 4.0));

    CHECK_THROWS_AS(re_part(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("im_part basics and reconstruction") {
    check_close(im_part(mat1(Complex(0, 1))), mat1(1.0));
    CMatrix h = mat2(3.0, Complex(1, 1), Complex(1, -1), 2.0);
    check_close(im_part(h), CMatrix::Zero(2, 2));
    check_close(im_part(mat1(Complex(1, 2))), mat1(2.0));

    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + t % 6;
        CMatrix x = ginibre(n, n, rng);
        CMatrix back = re_part(x) + kImaginaryUnit * im_part(x);
        REQUIRE(max_abs(x - back) <= 1e-14 * (1.0 + spectral_norm(x)));
        REQUIRE(is_hermitian(re_part(x)));
        REQUIRE(is_hermitian(im_part(x)));
    }
}

TEST_CASE("is_psd verdicts and margins") {
    auto [ok_i, m_i] = is_psd(identity(3), 0.0);
    CHECK(ok_i);
    CHECK(m_i == Catch::Approx(1.0));

    auto [ok_n, m_n] = is_psd(mat1(-1.0), 1e-8);
    CHECK_FALSE(ok_n);
    CHECK(m_n == Catch::Approx(-1.0));

    // eigenvalues of [[2,1],[1,2]] are 1 and 3
    auto [ok_2, m_2] = is_psd(mat2(2.0, 1.0, 1.0, 2.0), 0.0);
    CHECK(ok_2);
    CHECK(m_2 == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(is_psd(mat2(0.0, 1.0, 0.0, 0.0), 0.0), InvariantError);
}

TEST_CASE("is_psd margin is unitary-conjugation stable") {
    Rng rng(5);
    for (int t = 0; t < 25; ++t) {
        const int n = 2 + t % 5;
        CMatrix h = gaussian_hermitian(n, rng);
        CMatrix u = random_unitary(n, rng);
        const double m0 = is_psd(h, 0.0).second;
        const double m1 = is_psd((u.adjoint() * h * u + (u.adjoint() * h * u).adjoint()) / 2.0, 0.0).second;
        REQUIRE(std::abs(m0 - m1) <= 1e-10 * (1.0 + std::abs(m0)));
    }
}

TEST_CASE("sqrt_psd principal branch") {
    check_close(sqrt_psd(identity(3)), identity(3));
    check_close(sqrt_psd(mat1(4.0)), mat1(2.0));

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    CMatrix r = sqrt_psd(d);
    check_close(r, mat2(2.0, 0.0, 0.0, 3.0));

    CHECK_THROWS_AS(sqrt_psd(mat1(-1.0)), DomainError);
}

TEST_CASE("sqrt_psd squares back over seeded samples") {
    for (int t = 0; t < 1000; ++t) {
        Rng rng(mix_seed(11, 0, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 8;
        CMatrix h = random_psd(n, rng);
        CMatrix r = sqrt_psd(h);
        REQUIRE(is_psd(r, 1e-10).first);
        const double rel = (r * r - h).norm() / (1.0 + h.norm());
        REQUIRE(rel <= 1e-10);
    }
}

TEST_CASE("direct_sum stacking") {
    OperatorTuple a{mat1(1.0)}, b{mat1(2.0)};
    OperatorTuple s = direct_sum(a, b);
    REQUIRE(s.size() == 1);
    check_close(s[0], mat2(1.0, 0.0, 0.0, 2.0));

    // bordering by a 1x1 zero block
    OperatorTuple z{mat1(0.0)};
    OperatorTuple s2 = direct_sum(a, z);
    check_close(s2[0], mat2(1.0, 0.0, 0.0, 0.0));

    OperatorTuple a2{mat1(1.0), mat1(3.0)}, b2{mat1(2.0), mat1(4.0)};
    OperatorTuple s3 = direct_sum(a2, b2);
    REQUIRE(s3.size() == 2);
    check_close(s3[0], mat2(1.0, 0.0, 0.0, 2.0));
    check_close(s3[1], mat2(3.0, 0.0, 0.0, 4.0));

    CHECK_THROWS_AS(direct_sum(a2, b), ArityError);
}

TEST_CASE("direct_sum eigenvalue multiset is the union") {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 3, m = 1 + t % 4;
        CMatrix a = gaussian_hermitian(n, rng), b = gaussian_hermitian(m, rng);
        RVector ea = hermitian_eigenvalues(a), eb = hermitian_eigenvalues(b);
        RVector es = hermitian_eigenvalues(direct_sum(a, b));
        std::vector<double> expected(ea.data(), ea.data() + ea.size());
        expected.insert(expected.end(), eb.data(), eb.data() + eb.size());
        std::sort(expected.begin(), expected.end());
        for (Eigen::Index i = 0; i < es.size(); ++i)
            REQUIRE(std::abs(es(i) - expected[static_cast<std::size_t>(i)]) <= 1e-9);
    }
}

TEST_CASE("sample kinds honor their contracts") {
    SECTION("real_positive margin") {
        OperatorTuple xs = sample(SampleKind::real_positive, 4, 3, 2024);
        for (const auto& x : xs)
            REQUIRE(hermitian_eigenvalues(re_part(x)).minCoeff() >= 0.1 - 1e-10);
    }
    SECTION("unitary") {
        OperatorTuple us = sample(SampleKind::unitary, 5, 2, 7);
        for (const auto& u : us) REQUIRE(max_abs(u.adjoint() * u - identity(5)) <= 1e-10);
    }
    SECTION("isometry") {
        OperatorTuple vs = sample(SampleKind::isometry, 4, 2, 7);
        for (const auto& v : vs) {
            REQUIRE(v.rows() == 4);
            REQUIRE(v.cols() == 3);
            REQUIRE(max_abs(v.adjoint() * v - identity(3)) <= 1e-10);
        }
    }
    SECTION("psd_pair_ordered") {
        OperatorTuple p = sample(SampleKind::psd_pair_ordered, 3, 2, 11);
        REQUIRE(p.size() == 4);
        for (int j = 0; j < 2; ++j) {
            REQUIRE(is_psd(p[j], 1e-12).first);
            REQUIRE(is_psd(p[j + 2] - p[j], 1e-12).first);
        }
    }
    SECTION("determinism") {
        OperatorTuple a = sample(SampleKind::hermitian, 4, 2, 123);
        OperatorTuple b = sample(SampleKind::hermitian, 4, 2, 123);
        for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
        OperatorTuple c = sample(SampleKind::hermitian, 4, 2, 124);
        REQUIRE(max_abs(a[0] - c[0]) > 1e-6);
    }
    SECTION("bad config") {
        CHECK_THROWS_AS(parse_sample_kind("none-such"), ConfigError);
        CHECK_THROWS_AS(sample(SampleKind::hermitian, 0, 1, 1), ConfigError);
    }
}
