#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "realmono/free_function.hpp"
#include "realmono/invariance.hpp"
#include "realmono/json_io.hpp"

using namespace realmono;
using rmtest::check_close;
using rmtest::mat1;

TEST_CASE("evaluate on simple specs") {
    FreeFunctionSpec ident;
    ident.name = "x1";
    ident.arity = 1;
    ident.expr = var(1);
    Rng rng(5);
    CMatrix x = ginibre(3, 3, rng);
    check_close(evaluate(ident, {x}), x);

    // c I + a X1 + b X2 with (c,a,b) = (1,2,3) at (I,I) gives 6 I
    const FreeFunctionSpec& affine = zoo_member("affine-pos");
    check_close(evaluate(affine, identity_tuple(3, 2)), 6.0 * identity(3));

    const FreeFunctionSpec& nri = zoo_member("neg-re-inverse");
    check_close(evaluate(nri, {mat1(Complex(2, 5))}), mat1(-0.5), 1e-14);
}

TEST_CASE("evaluate guards arity and domain") {
    const FreeFunctionSpec& ni = zoo_member("neg-inverse");
    CHECK_THROWS_AS(evaluate(ni, identity_tuple(2, 2)), ArityError);
    CHECK_THROWS_AS(evaluate(ni, {mat1(Complex(-1, 0))}), DomainError);
    CHECK_THROWS_AS(evaluate(ni, {mat1(Complex(0, 1))}), DomainError); // boundary of P_Re

    const FreeFunctionSpec& sq = zoo_member("square");
    CHECK_THROWS_AS(evaluate(sq, {mat1(Complex(1, 1))}), DomainError); // not Hermitian
}

TEST_CASE("validation rejects non-dimension-uniform specs") {
    FreeFunctionSpec bad;
    bad.name = "with-block";
    bad.arity = 1;
    bad.expr = add({var(1), const_block_node(identity(2))});
    CHECK_THROWS_AS(validate(bad), SpecValidationError);
    CHECK_THROWS_AS(evaluate(bad, identity_tuple(2, 1)), SpecValidationError);

    FreeFunctionSpec over;
    over.arity = 1;
    over.expr = var(2);
    CHECK_THROWS_AS(validate(over), SpecValidationError);

    FreeFunctionSpec zero_arity;
    zero_arity.arity = 0;
    zero_arity.expr = cident(1.0);
    CHECK_THROWS_AS(validate(zero_arity), SpecValidationError);
}

TEST_CASE("spec json grammar round trips") {
    for (const auto& f : zoo()) {
        nlohmann::json j = spec_to_json(f);
        FreeFunctionSpec back = spec_from_json(j);
        CHECK(back.name == f.name);
        CHECK(back.arity == f.arity);
        CHECK(back.domain == f.domain);
        CHECK(spec_to_json(back).dump() == j.dump());

        // identical evaluation at a sampled domain point
        Rng rng(17);
        OperatorTuple x = detail::sample_domain_point(f, 2, rng);
        check_close(evaluate(back, x), evaluate(f, x), 1e-14);
    }

    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"arity", 1}}), SpecValidationError);
    auto with_block = nlohmann::json::parse(R"({
        "arity": 1,
        "expr": {"op": "const_block", "rows": 2, "cols": 2,
                 "data": [[1,0],[0,0],[0,0],[1,0]]}
    })");
    CHECK_THROWS_AS(spec_from_json(with_block), SpecValidationError);
}

TEST_CASE("free axioms hold across the zoo") {
    for (const auto& f : zoo()) {
        for (int n : {1, 2, 3, 4}) {
            auto [ds, un] = check_free_axioms(f, n, 25, 42);
            INFO(f.name << " at n=" << n << ": ds=" << ds.max_residual << " un=" << un.max_residual);
            CHECK(ds.pass(1e-9));
            CHECK(un.pass(1e-9));
        }
    }
}

TEST_CASE("affine specs satisfy the axioms to machine precision") {
    auto [ds, un] = check_free_axioms(zoo_member("affine-pos"), 3, 100, 7);
    CHECK(ds.max_residual <= 1e-12);
    CHECK(un.max_residual <= 1e-12);
}

TEST_CASE("similarity invariance separates holomorphic from Re-based specs") {
    // polynomials and affine specs commute with similarities
    InvarianceReport cube = check_similarity_invariance(zoo_member("cube"), 3, 50, 11);
    CHECK(cube.max_residual <= 1e-8);
    InvarianceReport aff = check_similarity_invariance(zoo_member("affine-pos"), 3, 50, 11);
    CHECK(aff.max_residual <= 1e-10);
    InvarianceReport ni = check_similarity_invariance(zoo_member("neg-inverse"), 3, 50, 11);
    CHECK(ni.max_residual <= 1e-8);

    // Re is not similarity-equivariant
    InvarianceReport nri = check_similarity_invariance(zoo_member("neg-re-inverse"), 2, 50, 11);
    CHECK(nri.max_residual > 0.01);
    REQUIRE(nri.witness.has_value());
}

TEST_CASE("corollary form composes and honors the decomposition") {
    FreeFunctionSpec g_id;
    g_id.name = "id";
    g_id.arity = 1;
    g_id.domain = Domain::all;
    g_id.expr = var(1);

    FreeFunctionSpec h_zero;
    h_zero.name = "zero";
    h_zero.arity = 2;
    h_zero.expr = cident(0.0);

    FreeFunctionSpec re_only = make_corollary_form(g_id, h_zero);
    Rng rng(23);
    CMatrix x = ginibre(3, 3, rng);
    check_close(evaluate(re_only, {x}), re_part(x), 1e-14);

    FreeFunctionSpec h_pass;
    h_pass.name = "w";
    h_pass.arity = 2;
    h_pass.expr = var(2);
    FreeFunctionSpec reconstruct = make_corollary_form(g_id, h_pass);
    check_close(evaluate(reconstruct, {x}), x, 1e-14);

    // Re F(X) = G(Re X) exactly, here with G = sqrt
    const FreeFunctionSpec& cs = zoo_member("corollary-sqrt");
    CMatrix y = random_real_positive(3, rng);
    check_close(re_part(evaluate(cs, {y})), sqrt_psd(re_part(y)), 1e-12);

    // a skew-valued G violates the contract
    FreeFunctionSpec g_skew;
    g_skew.name = "skew";
    g_skew.arity = 1;
    g_skew.domain = Domain::all;
    g_skew.expr = scale(kImaginaryUnit, var(1));
    CHECK_THROWS_AS(make_corollary_form(g_skew, h_zero), ContractError);
}

TEST_CASE("direct sums factor the spectrum of evaluations") {
    for (const auto& f : zoo()) {
        Rng rng(31);
        OperatorTuple a = detail::sample_domain_point(f, 2, rng);
        OperatorTuple b = detail::sample_domain_point(f, 3, rng);
        CMatrix joint = evaluate(f, direct_sum(a, b));
        CMatrix fa = evaluate(f, a), fb = evaluate(f, b);

        Eigen::ComplexEigenSolver<CMatrix> ej(joint), ea(fa), eb(fb);
        std::vector<Complex> expected;
        for (Eigen::Index i = 0; i < ea.eigenvalues().size(); ++i) expected.push_back(ea.eigenvalues()(i));
        for (Eigen::Index i = 0; i < eb.eigenvalues().size(); ++i) expected.push_back(eb.eigenvalues()(i));
        // greedy matching within 1e-9
        for (Eigen::Index i = 0; i < ej.eigenvalues().size(); ++i) {
            const Complex lam = ej.eigenvalues()(i);
            double best = 1e99;
            std::size_t best_at = 0;
            for (std::size_t q = 0; q < expected.size(); ++q) {
                const double d = std::abs(lam - expected[q]);
                if (d < best) {
                    best = d;
                    best_at = q;
                }
            }
            INFO(f.name << " eigenvalue " << lam);
            REQUIRE(best <= 1e-9 * (1.0 + std::abs(lam)));
            expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(best_at));
        }
    }
}

TEST_CASE("zoo lookup") {
    CHECK(zoo_names().size() >= 11);
    CHECK_THROWS_AS(zoo_member("nope"), ConfigError);
    for (const auto& f : zoo()) CHECK_NOTHROW(validate(f));
}
