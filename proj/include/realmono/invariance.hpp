#pragma once

#include <optional>
#include <string>
#include <utility>

#include "realmono/certify.hpp"
#include "realmono/free_function.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

/// Result of a free-axiom or similarity-invariance run. Residuals are
/// relative: ||lhs - rhs|| / (1 + ||rhs||) in max-entry norm.
struct InvarianceReport {
    std::string property; // "direct_sum" | "unitary" | "similarity"
    int dim = 0;
    int trials = 0;
    double max_residual = 0.0;
    std::optional<CertWitness> witness; // inputs at the worst residual when failing

    bool pass(double tol = 1e-9) const { return max_residual <= tol; }
};

namespace detail {
inline double rel_residual(const CMatrix& lhs, const CMatrix& rhs) {
    return max_abs(lhs - rhs) / (1.0 + max_abs(rhs));
}
} // namespace detail

/// Checks the two free-function axioms on seeded samples:
/// F(A (+) B) = F(A) (+) F(B) and F(U*AU) = U* F(A) U.
inline std::pair<InvarianceReport, InvarianceReport> check_free_axioms(const FreeFunctionSpec& f, int n,
                                                                       int trials, std::uint64_t seed) {
    validate(f);
    InvarianceReport ds{"direct_sum", n, trials, 0.0, std::nullopt};
    InvarianceReport un{"unitary", n, trials, 0.0, std::nullopt};

    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x401, static_cast<std::uint64_t>(t)));
        const int m = (t % 2 == 0) ? n : n + 1;
        OperatorTuple a = detail::sample_domain_point(f, n, rng);
        OperatorTuple b = detail::sample_domain_point(f, m, rng);
        try {
            CMatrix joint = evaluate(f, direct_sum(a, b));
            CMatrix split = direct_sum(evaluate(f, a), evaluate(f, b));
            const double r = detail::rel_residual(joint, split);
            if (r > ds.max_residual) {
                ds.max_residual = r;
                if (r > 1e-9) {
                    CertWitness w;
                    w.labels = {"A", "B"};
                    w.tuples = {a, b};
                    w.margin = -r;
                    w.dim = n;
                    w.trial = t;
                    ds.witness = std::move(w);
                }
            }
        } catch (const DomainError&) {
            // direct sums of domain points can graze the boundary; skip
        }

        CMatrix u = random_unitary(n, rng);
        OperatorTuple conj;
        conj.reserve(a.size());
        for (const auto& x : a) conj.push_back(u.adjoint() * x * u);
        try {
            CMatrix lhs = evaluate(f, conj);
            CMatrix rhs = u.adjoint() * evaluate(f, a) * u;
            const double r = detail::rel_residual(lhs, rhs);
            if (r > un.max_residual) {
                un.max_residual = r;
                if (r > 1e-9) {
                    CertWitness w;
                    w.labels = {"A", "U"};
                    w.tuples = {a, OperatorTuple{u}};
                    w.margin = -r;
                    w.dim = n;
                    w.trial = t;
                    un.witness = std::move(w);
                }
            }
        } catch (const DomainError&) {
        }
    }
    return {ds, un};
}

/// Residual of F(S^{-1} A S) = S^{-1} F(A) S over seeded invertible S with
/// condition number <= 10, resampling when the orbit leaves the domain.
inline InvarianceReport check_similarity_invariance(const FreeFunctionSpec& f, int n, int trials,
                                                    std::uint64_t seed) {
    validate(f);
    InvarianceReport rep{"similarity", n, trials, 0.0, std::nullopt};
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x402, static_cast<std::uint64_t>(t)));
        bool done = false;
        for (int attempt = 0; attempt < 100 && !done; ++attempt) {
            OperatorTuple a = detail::sample_domain_point(f, n, rng);
            CMatrix s = random_invertible(n, rng, 10.0);
            CMatrix s_inv = safe_inverse(s, "check_similarity_invariance");
            OperatorTuple orbit;
            orbit.reserve(a.size());
            for (const auto& x : a) orbit.push_back(s_inv * x * s);
            if (!domain_contains(f, orbit)) continue;
            try {
                CMatrix lhs = evaluate(f, orbit);
                CMatrix rhs = s_inv * evaluate(f, a) * s;
                const double r = detail::rel_residual(lhs, rhs);
                if (r > rep.max_residual) {
                    rep.max_residual = r;
                    if (r > 1e-8) {
                        CertWitness w;
                        w.labels = {"A", "S"};
                        w.tuples = {a, OperatorTuple{s}};
                        w.margin = -r;
                        w.dim = n;
                        w.trial = t;
                        rep.witness = std::move(w);
                    }
                }
                done = true;
            } catch (const DomainError&) {
            }
        }
    }
    return rep;
}

} // namespace realmono
