#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "realmono/real_order.hpp"

using namespace realmono;
using rmtest::mat1;

TEST_CASE("is_real_positive") {
    OrderVerdict v = is_real_positive(identity(2), 0.0);
    CHECK(v.holds);
    CHECK(v.margin == Catch::Approx(1.0));

    // Re = 0: boundary membership
    OrderVerdict b = is_real_positive(mat1(Complex(0, 1)), 1e-12);
    CHECK(b.holds);
    CHECK(b.margin == Catch::Approx(0.0).margin(1e-15));

    OrderVerdict f = is_real_positive(mat1(Complex(-1, 5)), 1e-8);
    CHECK_FALSE(f.holds);
    CHECK(f.margin == Catch::Approx(-1.0));
    REQUIRE(f.witness_vector.has_value());
}

TEST_CASE("in_P_re strictness") {
    CHECK(in_P_re(identity_tuple(2, 3), 1e-8));
    OperatorTuple with_boundary{identity(1), mat1(Complex(0, 1))};
    CHECK_FALSE(in_P_re(with_boundary, 1e-8));
    CHECK(in_P_re(OperatorTuple{mat1(0.1)}, 1e-8));
}

TEST_CASE("real_leq is a preorder, not a partial order") {
    OperatorTuple a{mat1(1.0)}, b{mat1(Complex(1, 1))};
    OrderVerdict ab = real_leq(a, b, 1e-12);
    OrderVerdict ba = real_leq(b, a, 1e-12);
    CHECK(ab.holds);
    CHECK(ba.holds);
    CHECK(max_abs(a[0] - b[0]) > 0.5); // equal real parts, different operators

    OrderVerdict refl = real_leq(a, a, 0.0);
    CHECK(refl.holds);
    CHECK(refl.margin == Catch::Approx(0.0).margin(1e-15));

    OperatorTuple zero{CMatrix::Zero(2, 2)}, one{identity(2)};
    OrderVerdict zi = real_leq(zero, one, 0.0);
    CHECK(zi.holds);
    CHECK(zi.margin == Catch::Approx(1.0));

    CHECK_THROWS_AS(real_leq(OperatorTuple{identity(2)}, OperatorTuple{identity(3)}, 0.0),
                    DimensionError);
}

TEST_CASE("failed comparisons carry an eigenvector witness") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 4;
        CMatrix a = random_real_positive(n, rng);
        CMatrix b = a - (0.5 + rng.uniform()) * identity(n) + kImaginaryUnit * gaussian_hermitian(n, rng);
        OrderVerdict v = real_leq(a, b, 1e-10);
        REQUIRE_FALSE(v.holds);
        REQUIRE(v.witness_vector.has_value());
        const CVector& w = *v.witness_vector;
        const Complex quad = (w.adjoint() * re_part(b - a) * w)(0, 0);
        REQUIRE(std::abs(quad.real() - v.margin) <= 1e-9 * (1.0 + std::abs(v.margin)));
        REQUIRE(std::abs(quad.imag()) <= 1e-9);
    }
}

TEST_CASE("shift property: A <= A + eps I with margin eps") {
    Rng rng(8);
    for (double eps : {0.0, 1e-3, 0.5, 2.0}) {
        OperatorTuple a{random_real_positive(3, rng), random_real_positive(3, rng)};
        OperatorTuple shifted;
        for (const auto& x : a) shifted.push_back(x + eps * identity(3));
        OrderVerdict v = real_leq(a, shifted, 1e-12);
        REQUIRE(v.holds);
        REQUIRE(std::abs(v.margin - eps) <= 1e-12 * (1.0 + eps));
    }
}

TEST_CASE("transitivity at margin level") {
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
        const int n = 1 + t % 4;
        auto [a, b] = sample_ordered_pair(n, 2, mix_seed(50, 1, static_cast<std::uint64_t>(t)));
        OperatorTuple c;
        for (const auto& x : b)
            c.push_back(x + random_psd(n, rng) + kImaginaryUnit * gaussian_hermitian(n, rng));
        REQUIRE(real_leq(a, b, 1e-12).margin >= -1e-12);
        REQUIRE(real_leq(b, c, 1e-12).margin >= -1e-12);
        REQUIRE(real_leq(a, c, 1e-12).margin >= -1e-12);
    }
}

TEST_CASE("sample_ordered_pair contract") {
    auto [a, b] = sample_ordered_pair(3, 2, 99);
    CHECK(in_P_re(a));
    CHECK(in_P_re(b));
    CHECK(real_leq(a, b, 1e-12).holds);
    CHECK(real_leq(a, b, 0.0).margin >= 0.0);

    auto [a2, b2] = sample_ordered_pair(3, 2, 99);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i] == a2[i]);
        REQUIRE(b[i] == b2[i]);
    }
}
