#pragma once

#include <string>
#include <vector>

#include "realmono/certify.hpp"
#include "realmono/free_function.hpp"
#include "realmono/real_order.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

/// A pair (Y, X) graded at dimension n; member of hypo(F) when Y <=_Re F(X).
struct GradedPoint {
    CMatrix y;
    OperatorTuple x;
};

inline OrderVerdict hypo_member(const FreeFunctionSpec& f, const GradedPoint& p, double tol = 1e-8) {
    require_uniform(p.x, "hypo_member");
    require_square(p.y, "hypo_member");
    if (p.y.rows() != p.x.front().rows()) throw DimensionError("hypo_member: Y and X dimensions differ");
    CMatrix fx = evaluate(f, p.x);
    return leq_with_base(p.y, fx, tol);
}

/// Saturation membership: X belongs to sat(candidates) iff some candidate Y
/// dominates it, Y >=_Re X.
inline bool sat_member(const std::vector<CMatrix>& candidates, const CMatrix& x, double tol = 1e-8) {
    require_square(x, "sat_member");
    for (const auto& y : candidates) {
        require_same_shape(y, x, "sat_member");
        if (leq_with_base(x, y, tol).holds) return true;
    }
    return false;
}

namespace detail {
/// Hypograph member by construction: (F(X) - P, X) with P real positive.
/// Small P keeps the point near the graph boundary where violations show.
inline GradedPoint sample_hypo_member(const FreeFunctionSpec& f, int n, Rng& rng, bool boundary) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        OperatorTuple x = sample_domain_point(f, n, rng);
        CMatrix p = random_real_positive(n, rng);
        if (boundary) p *= 0.01;
        try {
            return GradedPoint{evaluate(f, x) - p, x};
        } catch (const DomainError&) {
        }
    }
    throw SamplingError("sample_hypo_member: persistent domain exits for " + f.name);
}
} // namespace detail

/// Sampled matrix-convexity test of the real hypograph. Sub-tests:
///   (a) scalar convex combinations of members remain members;
///   (b) direct sums of members are members;
///   (c) isometry conjugations V*(Y,X)V of members are members (m < n);
///   (d) block-diagonal members restrict to members on each block;
///   (e) contraction conjugations, only when 0 is in the domain at
///       dimension 1 and (0,0) is a member.
inline CertificateReport check_matrix_convexity(const FreeFunctionSpec& f, const std::vector<int>& dims,
                                                long trials, std::uint64_t seed, double tol = 1e-8) {
    validate(f);
    if (dims.empty()) throw ConfigError("check_matrix_convexity: dims must be non-empty");
    CertificateReport rep;
    rep.claim = Claim::hypograph_convex;
    rep.spec_id = f.name;
    rep.dims = dims;
    rep.trials_requested = trials;
    rep.seed = seed;
    rep.tol = tol;

    bool contraction_gate = false;
    if (f.domain == Domain::all) {
        try {
            OperatorTuple zero(static_cast<std::size_t>(f.arity), CMatrix::Zero(1, 1));
            contraction_gate = leq_with_base(CMatrix::Zero(1, 1), evaluate(f, zero), tol).holds;
        } catch (const DomainError&) {
        }
    }

    auto record = [&](double margin, const char* sub, const GradedPoint& pt, int n, long trial) {
        rep.worst_margin = std::min(rep.worst_margin, margin);
        const double eff = scaled_tol(tol, 1.0 + spectral_norm(pt.y));
        if (margin < -eff && !rep.witness) {
            CertWitness w;
            w.labels = {"Y", "X"};
            w.tuples = {OperatorTuple{pt.y}, pt.x};
            w.margin = margin;
            w.sub_test = sub;
            w.dim = n;
            w.trial = trial;
            rep.witness = std::move(w);
            rep.outcome = Outcome::violated;
        }
        return rep.outcome == Outcome::violated;
    };

    const auto per_dim = detail::split_trials(trials, dims.size());
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const int n = dims[di];
        for (int t = 0; t < per_dim[di]; ++t) {
            Rng rng(mix_seed(seed, 0x601 + di, static_cast<std::uint64_t>(t)));
            const bool boundary = (t % 2 == 1);
            GradedPoint p1 = detail::sample_hypo_member(f, n, rng, boundary);
            GradedPoint p2 = detail::sample_hypo_member(f, n, rng, boundary);
            ++rep.trials_run;

            // (a) scalar convex combinations
            for (double lam : {0.3, 0.65}) {
                GradedPoint mix;
                mix.y = (1.0 - lam) * p1.y + lam * p2.y;
                for (std::size_t i = 0; i < p1.x.size(); ++i)
                    mix.x.push_back((1.0 - lam) * p1.x[i] + lam * p2.x[i]);
                try {
                    OrderVerdict v = hypo_member(f, mix, tol);
                    if (record(v.margin, "convex-combination", mix, n, rep.trials_run - 1)) return rep;
                } catch (const DomainError&) {
                }
            }

            // (b) direct sums
            {
                GradedPoint ds{direct_sum(p1.y, p2.y), direct_sum(p1.x, p2.x)};
                try {
                    OrderVerdict v = hypo_member(f, ds, tol);
                    if (record(v.margin, "direct-sum", ds, 2 * n, rep.trials_run - 1)) return rep;
                } catch (const DomainError&) {
                }
            }

            // (c) isometry conjugation down to m < n
            if (n >= 2) {
                const int m = 1 + static_cast<int>(rng.raw()() % static_cast<std::uint64_t>(n - 1));
                CMatrix v = random_isometry(n, m, rng);
                GradedPoint conj;
                conj.y = v.adjoint() * p1.y * v;
                for (const auto& xi : p1.x) conj.x.push_back(v.adjoint() * xi * v);
                try {
                    OrderVerdict ver = hypo_member(f, conj, tol);
                    if (record(ver.margin, "isometry", conj, m, rep.trials_run - 1)) return rep;
                } catch (const DomainError&) {
                }
            }

            // (d) reducing subspaces: blocks of a block-diagonal member
            {
                OperatorTuple bx = direct_sum(p1.x, p2.x);
                try {
                    CMatrix fbx = evaluate(f, bx);
                    CMatrix p = CMatrix::Zero(2 * n, 2 * n);
                    p.topLeftCorner(n, n) = random_real_positive(n, rng);
                    p.bottomRightCorner(n, n) = random_real_positive(n, rng);
                    CMatrix by = fbx - p;
                    GradedPoint top{by.topLeftCorner(n, n), p1.x};
                    GradedPoint bot{by.bottomRightCorner(n, n), p2.x};
                    OrderVerdict v1 = hypo_member(f, top, tol);
                    if (record(v1.margin, "reducing-subspace", top, n, rep.trials_run - 1)) return rep;
                    OrderVerdict v2 = hypo_member(f, bot, tol);
                    if (record(v2.margin, "reducing-subspace", bot, n, rep.trials_run - 1)) return rep;
                } catch (const DomainError&) {
                }
            }

            // (e) contraction conjugation, gated on 0 in C(1)
            if (contraction_gate) {
                CMatrix tm = random_contraction(n, rng);
                GradedPoint conj;
                conj.y = tm.adjoint() * p1.y * tm;
                for (const auto& xi : p1.x) conj.x.push_back(tm.adjoint() * xi * tm);
                try {
                    OrderVerdict ver = hypo_member(f, conj, tol);
                    if (record(ver.margin, "contraction", conj, n, rep.trials_run - 1)) return rep;
                } catch (const DomainError&) {
                }
            }
        }
    }
    return rep;
}

} // namespace realmono
