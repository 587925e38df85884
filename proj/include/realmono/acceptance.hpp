#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "realmono/certify.hpp"
#include "realmono/choi.hpp"
#include "realmono/free_function.hpp"
#include "realmono/hypograph.hpp"
#include "realmono/invariance.hpp"
#include "realmono/json_io.hpp"
#include "realmono/means.hpp"
#include "realmono/pluriharmonic.hpp"

// The verification suite behind `realmono verify-all`: one check per
// theorem-facing claim, with fixed budgets and tolerances. Each criterion
// reports pass/fail plus a one-line detail.

namespace realmono {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

inline constexpr std::uint64_t kAcceptanceSeed = 424243;

namespace acceptance {

// 1. Every zoo member satisfies the direct-sum and unitary axioms at
//    n in {1,2,3}, 100 trials each, relative residual <= 1e-9.
inline CriterionResult free_axiom_suite(std::uint64_t seed) {
    CriterionResult r{1, "free-axiom suite over the zoo", true, ""};
    double worst = 0.0;
    std::string worst_at = "-";
    for (const auto& f : zoo()) {
        for (int n : {1, 2, 3}) {
            auto [ds, un] = check_free_axioms(f, n, 100, mix_seed(seed, 1, n));
            const double m = std::max(ds.max_residual, un.max_residual);
            if (m > worst) {
                worst = m;
                worst_at = f.name + " at n=" + std::to_string(n);
            }
            if (!ds.pass(1e-9) || !un.pass(1e-9)) r.pass = false;
        }
    }
    std::ostringstream os;
    os << "worst residual " << worst << " (" << worst_at << ")";
    r.detail = os.str();
    return r;
}

// 2. For 100 seeded Hermitian PD pairs (n <= 4), the geometric-mean formula
//    makes [[A,G],[G,B]] PSD within 1e-8 while G + 1e-3 I is infeasible.
inline CriterionResult geometric_mean_consistency(std::uint64_t seed) {
    CriterionResult r{2, "geometric-mean max characterization", true, ""};
    double worst_feasible = 0.0, worst_inflated = -1e99;
    for (int t = 0; t < 100; ++t) {
        Rng rng(mix_seed(seed, 2, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 4;
        CMatrix a = random_psd(n, rng, 0.1), b = random_psd(n, rng, 0.1);
        CMatrix g = mean(MeanKind::geometric, a, b);
        MaxCharReport rep = verify_max_characterization(a, b, g, 1e-3, 1e-8);
        worst_feasible = std::min(worst_feasible, rep.feasible_margin);
        worst_inflated = std::max(worst_inflated, rep.inflated_margin);
        if (!rep.feasible || !rep.inflated_infeasible) r.pass = false;
    }
    std::ostringstream os;
    os << "worst feasible margin " << worst_feasible << ", worst inflated margin " << worst_inflated;
    r.detail = os.str();
    return r;
}

// 3. The geometric mean does not preserve the real positive order: a
//    violation with margin < -1e-6 is found within 1e4 trials at n <= 2,
//    and the witness replays bitwise from the seed.
inline CriterionResult real_order_failure_of_geomean(std::uint64_t seed) {
    CriterionResult r{3, "geometric mean violates the real order", false, ""};
    CertificateReport first = certify_monotone(zoo_member("geomean"), {1, 2}, 10000, seed);
    CertificateReport second = certify_monotone(zoo_member("geomean"), {1, 2}, 10000, seed);
    const bool found = first.violated() && first.worst_margin < -1e-6;
    const bool replays = to_json(first).dump() == to_json(second).dump();
    r.pass = found && replays;
    std::ostringstream os;
    os << "violation margin " << first.worst_margin << " after " << first.trials_run
       << " trials, replay " << (replays ? "bit-identical" : "MISMATCH");
    r.detail = os.str();
    return r;
}

// 4. Re-independence detector: -X^{-1} is refuted by the analytic 1x1
//    witness (margin -1/2 within 1e-10); -(Re X)^{-1} passes 1e3 trials at
//    n <= 4.
inline CriterionResult re_independence_detector(std::uint64_t seed) {
    CriterionResult r{4, "real-part independence detector", false, ""};
    CertificateReport ni = re_independence_test(zoo_member("neg-inverse"), {1}, 100, seed);
    const bool refuted = ni.violated() && std::abs(ni.worst_margin + 0.5) <= 1e-10 &&
                         ni.witness && ni.witness->sub_test == "im-dependence";
    CertificateReport nri = re_independence_test(zoo_member("neg-re-inverse"), {1, 2, 3, 4}, 1000, seed);
    r.pass = refuted && !nri.violated();
    std::ostringstream os;
    os << "-X^-1 margin " << ni.worst_margin << "; -(Re X)^-1 "
       << outcome_name(nri.outcome) << " in " << nri.trials_run << " trials";
    r.detail = os.str();
    return r;
}

// 5. Rigidity: affine_fit recovers planted nonnegative coefficients to
//    1e-8; X^2 is flagged nonlinear (residual > 1e-2) and has a
//    monotonicity witness within 1e4 trials.
inline CriterionResult rigidity_fit(std::uint64_t seed) {
    CriterionResult r{5, "affine rigidity fit", false, ""};
    Rng rng(mix_seed(seed, 5));
    std::vector<double> planted;
    std::vector<ExprPtr> terms{cident(Complex(0.7, -0.3))};
    for (int j = 1; j <= 3; ++j) {
        const double c = 0.1 + 2.0 * rng.uniform();
        planted.push_back(c);
        terms.push_back(scale(c, var(j)));
    }
    FreeFunctionSpec affine;
    affine.name = "planted-affine";
    affine.arity = 3;
    affine.domain = Domain::all;
    affine.expr = add(terms);

    AffineFit fit = affine_fit(affine, 6, seed);
    bool recovered = std::abs(fit.a0 - Complex(0.7, -0.3)) <= 1e-8 && fit.residual <= 1e-8;
    for (int j = 0; j < 3; ++j)
        recovered = recovered && std::abs(fit.coeffs[static_cast<std::size_t>(j)] -
                                          Complex(planted[static_cast<std::size_t>(j)], 0.0)) <= 1e-8;

    AffineFit sq_fit = affine_fit(zoo_member("square"), 6, seed);
    CertificateReport sq_mono = certify_monotone(zoo_member("square"), {1, 2}, 10000, seed);
    r.pass = recovered && sq_fit.residual > 1e-2 && sq_mono.violated();
    std::ostringstream os;
    os << "planted residual " << fit.residual << "; X^2 residual " << sq_fit.residual
       << ", monotone " << outcome_name(sq_mono.outcome);
    r.detail = os.str();
    return r;
}

// 6. Monotone => concave chain: no zoo member passes certify_monotone at
//    dimension 2n while failing certify_concave at dimension n, n in
//    {1,2,4}; plus 100 seeded block constructions with residuals <= 1e-10.
inline CriterionResult monotone_concave_chain(std::uint64_t seed) {
    CriterionResult r{6, "monotone => concave chain + block construction", true, ""};
    std::string breach = "-";
    for (const auto& f : zoo()) {
        for (int n : {1, 2, 4}) {
            CertificateReport mono = certify_monotone(f, {2 * n}, 800, mix_seed(seed, 6, n));
            if (mono.violated()) continue; // implication vacuous
            CertificateReport conc = certify_concave(f, {n}, 300, mix_seed(seed, 7, n));
            if (conc.violated()) {
                r.pass = false;
                breach = f.name + " at n=" + std::to_string(n);
            }
        }
    }

    double worst_unitary = 0.0, worst_conj = 0.0, worst_dom = 1e99;
    bool blocks_ok = true;
    for (int t = 0; t < 100; ++t) {
        Rng rng(mix_seed(seed, 8, static_cast<std::uint64_t>(t)));
        const int n = 1 + t % 3;
        OperatorTuple a{random_real_positive(n, rng)}, b{random_real_positive(n, rng)};
        const double lambda = 0.1 + 0.8 * rng.uniform();
        const double eps = 0.01 + rng.uniform();
        BlockConstructionReport br = block_concavity_construction(a, b, lambda, eps);
        worst_unitary = std::max(worst_unitary, br.unitary_residual);
        worst_conj = std::max(worst_conj, br.conjugation_residual);
        worst_dom = std::min(worst_dom, br.domination_margin);
        blocks_ok = blocks_ok && br.pass && br.unitary_residual <= 1e-10 && br.conjugation_residual <= 1e-10;
    }
    r.pass = r.pass && blocks_ok;
    std::ostringstream os;
    os << "chain breach: " << breach << "; block residuals (unitary " << worst_unitary << ", conj "
       << worst_conj << ", domination margin " << worst_dom << ")";
    r.detail = os.str();
    return r;
}

// 7. Derivative criterion agrees with certify_monotone across the zoo, and
//    Simpson quadrature of DF along segments reconstructs F(B) - F(A)
//    within 1e-6 relative for the smooth members.
inline CriterionResult derivative_criterion_agreement(std::uint64_t seed) {
    CriterionResult r{7, "derivative criterion vs monotonicity", true, ""};
    std::string disagreement = "-";
    for (const auto& f : zoo()) {
        const std::vector<int> dims{1, 2};
        CertificateReport mono = certify_monotone(f, dims, 800, mix_seed(seed, 9));
        CertificateReport dc = derivative_criterion(f, dims, 800, mix_seed(seed, 10));
        if (mono.violated() != dc.violated()) {
            r.pass = false;
            disagreement = f.name + " (monotone " + outcome_name(mono.outcome) + ", derivative " +
                           outcome_name(dc.outcome) + ")";
        }
    }

    double worst_recon = 0.0;
    for (const char* name : {"affine-pos", "square", "cube", "neg-inverse"}) {
        const FreeFunctionSpec& f = zoo_member(name);
        for (int t = 0; t < 5; ++t) {
            Rng rng(mix_seed(seed, 11, static_cast<std::uint64_t>(t)));
            OperatorTuple a = detail::sample_domain_point(f, 2, rng);
            OperatorTuple b = detail::sample_domain_point(f, 2, rng);
            CMatrix lhs = integrate_derivative_along_segment(f, a, b);
            CMatrix rhs = evaluate(f, b) - evaluate(f, a);
            worst_recon = std::max(worst_recon, max_abs(lhs - rhs) / (1.0 + max_abs(rhs)));
        }
    }
    r.pass = r.pass && worst_recon <= 1e-6;
    std::ostringstream os;
    os << "disagreement: " << disagreement << "; worst integral residual " << worst_recon;
    r.detail = os.str();
    return r;
}

// 8. Choi module: transpose at n=2 is flagged non-CP with eigenvalue
//    -1 +- 1e-10; seeded Kraus maps pass with reconstruction <= 1e-9.
inline CriterionResult choi_criterion(std::uint64_t seed) {
    CriterionResult r{8, "Choi complete-positivity tests", false, ""};
    CpResult tr = is_cp(choi_of_linear_map(transpose_map(2), 2));
    const bool transpose_flagged = !tr.verdict.holds && std::abs(tr.verdict.margin + 1.0) <= 1e-10;

    bool kraus_ok = true;
    double worst_recon = 0.0;
    for (int t = 0; t < 10; ++t) {
        Rng rng(mix_seed(seed, 12, static_cast<std::uint64_t>(t)));
        const int n = 2 + t % 2, rank = 1 + t % 3;
        std::vector<CMatrix> vs;
        for (int i = 0; i < rank; ++i) vs.push_back(ginibre(n, n, rng));
        CpResult cp = is_cp(choi_of_linear_map(kraus_map(n, vs), n));
        worst_recon = std::max(worst_recon, cp.reconstruction_residual);
        kraus_ok = kraus_ok && cp.verdict.holds && cp.reconstruction_residual <= 1e-9;
    }
    r.pass = transpose_flagged && kraus_ok;
    std::ostringstream os;
    os << "transpose margin " << tr.verdict.margin << "; worst Kraus reconstruction " << worst_recon;
    r.detail = os.str();
    return r;
}

// 9. Hypograph equivalence: check_matrix_convexity and certify_monotone
//    agree for zoo members mapping P_Re into P_Re.
inline CriterionResult hypograph_equivalence(std::uint64_t seed) {
    CriterionResult r{9, "hypograph convexity <=> monotonicity", true, ""};
    std::string disagreement = "-";
    int tested = 0;
    for (const auto& f : zoo()) {
        if (!f.maps_into_p_re) continue;
        ++tested;
        const std::vector<int> dims{1, 2};
        CertificateReport conv = check_matrix_convexity(f, dims, 600, mix_seed(seed, 13));
        CertificateReport mono = certify_monotone(f, dims, 800, mix_seed(seed, 14));
        if (conv.violated() != mono.violated()) {
            r.pass = false;
            disagreement = f.name + " (convexity " + outcome_name(conv.outcome) + ", monotone " +
                           outcome_name(mono.outcome) + ")";
        }
    }
    std::ostringstream os;
    os << tested << " members tested; disagreement: " << disagreement;
    r.detail = os.str();
    return r;
}

// 10. Pluriharmonic lab: dbar residual <= 1e-6 on the holomorphic bank;
//     linearity_test accepts linear fields and rejects exp(z)-1, z^2 at
//     the Im-dependence stage.
inline CriterionResult pluriharmonic_lab(std::uint64_t seed) {
    CriterionResult r{10, "pluriharmonic lab", false, ""};
    double worst_dbar = 0.0;
    for (const auto& f : field_bank()) {
        if (f.declared != FieldClass::holomorphic) continue;
        for (int p = 0; p < 100; ++p) {
            Rng rng(mix_seed(seed, 15, static_cast<std::uint64_t>(p)));
            CVector z(f.m);
            for (int j = 0; j < f.m; ++j) z(j) = 0.5 * Complex(rng.gauss(), rng.gauss());
            worst_dbar = std::max(worst_dbar, wirtinger(f, z).dbar.cwiseAbs().maxCoeff());
        }
    }

    LinearityReport lz = linearity_test(bank_field("z"), 12, seed);
    LinearityReport l2 = linearity_test(bank_field("double-z"), 12, seed);
    LinearityReport ls = linearity_test(bank_field("sum-lin"), 16, seed);
    LinearityReport le = linearity_test(bank_field("exp-minus-one"), 12, seed);
    LinearityReport lq = linearity_test(bank_field("z-squared"), 12, seed);

    const bool accepts = lz.linear && l2.linear && ls.linear;
    const bool rejects = !le.linear && le.reject_stage == "im-dependence" && !lq.linear &&
                         lq.reject_stage == "im-dependence";
    r.pass = worst_dbar <= 1e-6 && accepts && rejects;
    std::ostringstream os;
    os << "worst dbar " << worst_dbar << "; linear accepted " << (accepts ? "yes" : "NO")
       << ", exp(z)-1 and z^2 rejected " << (rejects ? "at im-dependence" : "INCORRECTLY");
    r.detail = os.str();
    return r;
}

} // namespace acceptance

inline std::vector<CriterionResult> run_acceptance_criteria(std::uint64_t seed = kAcceptanceSeed) {
    return {
        acceptance::free_axiom_suite(seed),
        acceptance::geometric_mean_consistency(seed),
        acceptance::real_order_failure_of_geomean(seed),
        acceptance::re_independence_detector(seed),
        acceptance::rigidity_fit(seed),
        acceptance::monotone_concave_chain(seed),
        acceptance::derivative_criterion_agreement(seed),
        acceptance::choi_criterion(seed),
        acceptance::hypograph_equivalence(seed),
        acceptance::pluriharmonic_lab(seed),
    };
}

} // namespace realmono
