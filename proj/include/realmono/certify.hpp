#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "realmono/free_function.hpp"
#include "realmono/matrix.hpp"
#include "realmono/real_order.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

enum class Claim { monotone, concave, derivative_cp, re_independent, affine, hypograph_convex };
enum class Outcome { no_violation_found, violated };

inline std::string claim_name(Claim c) {
    switch (c) {
        case Claim::monotone: return "monotone";
        case Claim::concave: return "concave";
        case Claim::derivative_cp: return "derivative_cp";
        case Claim::re_independent: return "re_independent";
        case Claim::affine: return "affine";
        case Claim::hypograph_convex: return "hypograph_convex";
    }
    return "unknown";
}

inline std::string outcome_name(Outcome o) {
    return o == Outcome::violated ? "violated" : "no_violation_found";
}

/// Serializable offending inputs. Labels identify each tuple's role.
struct CertWitness {
    std::vector<std::string> labels;
    std::vector<OperatorTuple> tuples;
    double margin = 0.0;
    std::string sub_test;
    int dim = 0;
    long trial = -1;
};

/// Outcome of a sampling-based certification run. "no_violation_found" is
/// not a proof: it states that the seeded search at the recorded budget
/// found no counterexample.
struct CertificateReport {
    Claim claim = Claim::monotone;
    std::string spec_id;
    std::vector<int> dims;
    long trials_requested = 0;
    long trials_run = 0;
    std::uint64_t seed = 0;
    double tol = 1e-8; // relative base; effective tol is tol * max(1, scale)
    Outcome outcome = Outcome::no_violation_found;
    double worst_margin = std::numeric_limits<double>::infinity();
    double aux_residual = 0.0; // claim-specific residual (e.g. amplification)
    std::optional<CertWitness> witness;

    bool violated() const { return outcome == Outcome::violated; }
};

inline double scaled_tol(double base, double scale) { return base * std::max(1.0, scale); }

/// Componentwise <=_Re with a scale-aware tolerance per component.
inline OrderVerdict leq_with_base(const OperatorTuple& a, const OperatorTuple& b, double base) {
    if (a.size() != b.size()) throw DimensionError("leq_with_base: arity mismatch");
    require_uniform(a, "leq_with_base");
    require_uniform(b, "leq_with_base");
    if (a.front().rows() != b.front().rows())
        throw DimensionError("leq_with_base: dimension mismatch");
    OrderVerdict worst;
    worst.holds = true;
    worst.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        CMatrix h = re_part(b[i] - a[i]);
        auto [margin, vec] = min_eig_hermitian(h);
        if (margin < worst.margin) {
            worst.margin = margin;
            worst.witness_vector = vec;
            worst.witness_index = static_cast<int>(i);
        }
        worst.holds = worst.holds && margin >= -scaled_tol(base, spectral_norm(h));
    }
    if (worst.holds) worst.witness_vector.reset();
    return worst;
}

inline OrderVerdict leq_with_base(const CMatrix& a, const CMatrix& b, double base) {
    return leq_with_base(OperatorTuple{a}, OperatorTuple{b}, base);
}

namespace detail {

/// Sample a point of F's declared domain; persistent failures are a
/// sampling error.
inline OperatorTuple sample_domain_point(const FreeFunctionSpec& f, int n, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        OperatorTuple x;
        x.reserve(static_cast<std::size_t>(f.arity));
        for (int j = 0; j < f.arity; ++j) {
            switch (f.domain) {
                case Domain::all: x.push_back(ginibre(n, n, rng)); break;
                case Domain::p_re: x.push_back(random_real_positive(n, rng)); break;
                case Domain::hermitian_pd: x.push_back(random_psd(n, rng, 0.05)); break;
            }
        }
        if (domain_contains(f, x)) return x;
    }
    throw SamplingError("sample_domain_point: persistent domain exits for " + f.name);
}

/// Ordered pair A <=_Re B inside F's domain.
inline std::pair<OperatorTuple, OperatorTuple> sample_ordered_pair_for(const FreeFunctionSpec& f, int n,
                                                                       Rng& rng) {
    OperatorTuple a, b;
    a.reserve(static_cast<std::size_t>(f.arity));
    b.reserve(static_cast<std::size_t>(f.arity));
    for (int j = 0; j < f.arity; ++j) {
        if (f.domain == Domain::hermitian_pd) {
            CMatrix base = random_psd(n, rng, 0.05);
            a.push_back(base);
            b.push_back(base + random_psd(n, rng));
        } else {
            CMatrix base = random_real_positive(n, rng);
            a.push_back(base);
            b.push_back(base + random_psd(n, rng) + kImaginaryUnit * gaussian_hermitian(n, rng));
        }
    }
    return {a, b};
}

inline std::vector<int> split_trials(long trials, std::size_t dims) {
    std::vector<int> out(dims, static_cast<int>(trials / static_cast<long>(dims)));
    long rem = trials % static_cast<long>(dims);
    for (long i = 0; i < rem; ++i) out[static_cast<std::size_t>(i)] += 1;
    return out;
}

} // namespace detail

/// Shrink a monotonicity witness: bisect t in B(t) = A + t (B - A) for the
/// smallest ordered increment that still violates, keeping the failing end.
inline std::pair<OperatorTuple, double> minimize_pair_witness(
    const FreeFunctionSpec& f, const OperatorTuple& a, const OperatorTuple& b,
    const std::function<double(const OperatorTuple&, const OperatorTuple&)>& margin_of, double neg_threshold) {
    double lo = 0.0, hi = 1.0;
    OperatorTuple best = b;
    double best_margin = margin_of(a, b);
    for (int it = 0; it < 28; ++it) {
        const double mid = (lo + hi) / 2.0;
        OperatorTuple bm;
        bm.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) bm.push_back(a[i] + mid * (b[i] - a[i]));
        double m;
        try {
            m = margin_of(a, bm);
        } catch (const DomainError&) {
            lo = mid;
            continue;
        }
        if (m < neg_threshold) {
            hi = mid;
            best = bm;
            best_margin = m;
        } else {
            lo = mid;
        }
    }
    return {best, best_margin};
}

/// Real operator monotonicity search: samples ordered pairs A <=_Re B in
/// F's domain and checks F(A) <=_Re F(B). First violation is minimized and
/// recorded as the witness.
inline CertificateReport certify_monotone(const FreeFunctionSpec& f, const std::vector<int>& dims,
                                          long trials, std::uint64_t seed, double tol = 1e-8) {
    validate(f);
    if (dims.empty()) throw ConfigError("certify_monotone: dims must be non-empty");
    CertificateReport rep;
    rep.claim = Claim::monotone;
    rep.spec_id = f.name;
    rep.dims = dims;
    rep.trials_requested = trials;
    rep.seed = seed;
    rep.tol = tol;

    auto margin_of = [&](const OperatorTuple& a, const OperatorTuple& b) {
        return leq_with_base(evaluate(f, a), evaluate(f, b), tol).margin;
    };

    const auto per_dim = detail::split_trials(trials, dims.size());
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const int n = dims[di];
        for (int t = 0; t < per_dim[di]; ++t) {
            Rng rng(mix_seed(seed, 0x301 + di, static_cast<std::uint64_t>(t)));
            OperatorTuple a, b;
            CMatrix fa, fb;
            bool ok = false;
            for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
                std::tie(a, b) = detail::sample_ordered_pair_for(f, n, rng);
                try {
                    fa = evaluate(f, a);
                    fb = evaluate(f, b);
                    ok = true;
                } catch (const DomainError&) {
                }
            }
            if (!ok) throw SamplingError("certify_monotone: persistent domain exits for " + f.name);
            ++rep.trials_run;
            OrderVerdict v = leq_with_base(fa, fb, tol);
            rep.worst_margin = std::min(rep.worst_margin, v.margin);
            if (!v.holds) {
                const double thresh = -scaled_tol(tol, std::max(spectral_norm(fa), spectral_norm(fb)));
                auto [bmin, mmin] = minimize_pair_witness(f, a, b, margin_of, thresh);
                CertWitness w;
                w.labels = {"A", "B"};
                w.tuples = {a, bmin};
                w.margin = mmin;
                w.dim = n;
                w.trial = rep.trials_run - 1;
                rep.witness = std::move(w);
                rep.outcome = Outcome::violated;
                return rep;
            }
        }
    }
    return rep;
}

/// Real operator concavity search over sampled pairs and mixing weights.
inline CertificateReport certify_concave(const FreeFunctionSpec& f, const std::vector<int>& dims,
                                         long trials, std::uint64_t seed, double tol = 1e-8,
                                         const std::vector<double>& lambdas = {0.25, 0.5, 0.75}) {
    validate(f);
    if (dims.empty()) throw ConfigError("certify_concave: dims must be non-empty");
    if (f.domain == Domain::all) {
        // convex domain required; the full space qualifies
    }
    CertificateReport rep;
    rep.claim = Claim::concave;
    rep.spec_id = f.name;
    rep.dims = dims;
    rep.trials_requested = trials;
    rep.seed = seed;
    rep.tol = tol;

    const auto per_dim = detail::split_trials(trials, dims.size());
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const int n = dims[di];
        for (int t = 0; t < per_dim[di]; ++t) {
            Rng rng(mix_seed(seed, 0x302 + di, static_cast<std::uint64_t>(t)));
            OperatorTuple a, b;
            CMatrix fa, fb;
            bool ok = false;
            for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
                a = detail::sample_domain_point(f, n, rng);
                b = detail::sample_domain_point(f, n, rng);
                try {
                    fa = evaluate(f, a);
                    fb = evaluate(f, b);
                    ok = true;
                } catch (const DomainError&) {
                }
            }
            if (!ok) throw SamplingError("certify_concave: persistent domain exits for " + f.name);
            ++rep.trials_run;
            for (double lam : lambdas) {
                OperatorTuple mix;
                mix.reserve(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) mix.push_back((1.0 - lam) * a[i] + lam * b[i]);
                CMatrix lhs = (1.0 - lam) * fa + lam * fb;
                CMatrix rhs;
                try {
                    rhs = evaluate(f, mix);
                } catch (const DomainError&) {
                    continue; // convex domains should not exit; skip degenerate numerics
                }
                OrderVerdict v = leq_with_base(lhs, rhs, tol);
                rep.worst_margin = std::min(rep.worst_margin, v.margin);
                if (!v.holds) {
                    auto margin_of = [&](const OperatorTuple& aa, const OperatorTuple& bb) {
                        OperatorTuple m2;
                        m2.reserve(aa.size());
                        for (std::size_t i = 0; i < aa.size(); ++i)
                            m2.push_back((1.0 - lam) * aa[i] + lam * bb[i]);
                        CMatrix l2 = (1.0 - lam) * evaluate(f, aa) + lam * evaluate(f, bb);
                        return leq_with_base(l2, evaluate(f, m2), tol).margin;
                    };
                    const double thresh = -scaled_tol(tol, std::max(spectral_norm(lhs), spectral_norm(rhs)));
                    auto [bmin, mmin] = minimize_pair_witness(f, a, b, margin_of, thresh);
                    CertWitness w;
                    w.labels = {"A", "B"};
                    w.tuples = {a, bmin};
                    w.margin = mmin;
                    w.sub_test = "lambda=" + std::to_string(lam);
                    w.dim = n;
                    w.trial = rep.trials_run - 1;
                    rep.witness = std::move(w);
                    rep.outcome = Outcome::violated;
                    return rep;
                }
            }
        }
    }
    return rep;
}

/// Central-difference Fréchet derivative with one Richardson step, treating
/// F as a map of the real-linear variables (Re X, Im X).
struct FdResult {
    CMatrix value;
    double error_estimate = 0.0;
    double h = 0.0;
};

inline FdResult frechet_derivative(const FreeFunctionSpec& f, const OperatorTuple& x,
                                   const OperatorTuple& h_dir, double h_step = 1e-5) {
    if (static_cast<int>(x.size()) != f.arity || h_dir.size() != x.size())
        throw ArityError("frechet_derivative: tuple arity mismatch");
    const double h = h_step * (1.0 + tuple_norm(x));
    auto at = [&](double t) {
        OperatorTuple p;
        p.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) p.push_back(x[i] + t * h_dir[i]);
        try {
            return evaluate(f, p);
        } catch (const DomainError& e) {
            throw StepSizeError(std::string("frechet_derivative: stencil left the domain: ") + e.what());
        }
    };
    CMatrix d1 = (at(h) - at(-h)) / (2.0 * h);
    CMatrix d2 = (at(h / 2.0) - at(-h / 2.0)) / h;
    FdResult out;
    out.value = (4.0 * d2 - d1) / 3.0;
    out.error_estimate = max_abs(d2 - d1);
    out.h = h;
    return out;
}

namespace detail {
inline FdResult fd_with_retries(const FreeFunctionSpec& f, const OperatorTuple& x,
                                const OperatorTuple& h_dir, double h_step) {
    for (int k = 0; k < 4; ++k) {
        try {
            return frechet_derivative(f, x, h_dir, h_step);
        } catch (const StepSizeError&) {
            h_step /= 2.0; // caller-halving contract
        }
    }
    return frechet_derivative(f, x, h_dir, h_step);
}

inline OperatorTuple kron_each(const OperatorTuple& xs, const CMatrix& v) {
    OperatorTuple out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(kron(x, v));
    return out;
}
} // namespace detail

/// Simpson quadrature of DF along the segment A -> B; for differentiable F
/// this reconstructs F(B) - F(A).
inline CMatrix integrate_derivative_along_segment(const FreeFunctionSpec& f, const OperatorTuple& a,
                                                  const OperatorTuple& b, int intervals = 64,
                                                  double h_step = 1e-5) {
    if (intervals % 2 != 0) ++intervals;
    OperatorTuple dir;
    dir.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) dir.push_back(b[i] - a[i]);
    auto df_at = [&](double t) {
        OperatorTuple p;
        p.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p.push_back(a[i] + t * dir[i]);
        return detail::fd_with_retries(f, p, dir, h_step).value;
    };
    const Eigen::Index n = a.front().rows();
    CMatrix acc = CMatrix::Zero(n, n);
    const double dt = 1.0 / intervals;
    for (int i = 0; i <= intervals; ++i) {
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * df_at(i * dt);
    }
    return acc * (dt / 3.0);
}

/// Derivative criterion at sampled base points: DF(X)[H] >=_Re 0 for sampled
/// H >=_Re 0 (generic, boundary Re H = 0, and PSD directions), plus the
/// amplification identity DF(X (x) I)[H (x) V] = DF(X)[H] (x) V and amplified
/// positivity at levels m <= 4.
inline CertificateReport derivative_criterion(const FreeFunctionSpec& f, const std::vector<int>& dims,
                                              long trials, std::uint64_t seed, double tol = 1e-8,
                                              double h_step = 1e-5) {
    validate(f);
    if (dims.empty()) throw ConfigError("derivative_criterion: dims must be non-empty");
    CertificateReport rep;
    rep.claim = Claim::derivative_cp;
    rep.spec_id = f.name;
    rep.dims = dims;
    rep.trials_requested = trials;
    rep.seed = seed;
    rep.tol = tol;

    const auto per_dim = detail::split_trials(trials, dims.size());
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const int n = dims[di];
        for (int t = 0; t < per_dim[di]; ++t) {
            Rng rng(mix_seed(seed, 0x303 + di, static_cast<std::uint64_t>(t)));
            OperatorTuple x = detail::sample_domain_point(f, n, rng);

            OperatorTuple h;
            h.reserve(static_cast<std::size_t>(f.arity));
            const int kind = t % 3;
            for (int j = 0; j < f.arity; ++j) {
                if (f.domain == Domain::hermitian_pd || kind == 2) {
                    h.push_back(random_psd(n, rng));
                } else if (kind == 0) {
                    h.push_back(random_real_positive(n, rng, 0.05));
                } else {
                    h.push_back(kImaginaryUnit * gaussian_hermitian(n, rng)); // boundary: Re H = 0
                }
            }

            FdResult fd;
            try {
                fd = detail::fd_with_retries(f, x, h, h_step);
            } catch (const StepSizeError&) {
                continue; // skip pathological stencil; budget recorded below
            }
            ++rep.trials_run;
            CMatrix re_df = re_part(fd.value);
            const double margin = hermitian_eigenvalues(re_df).minCoeff();
            rep.worst_margin = std::min(rep.worst_margin, margin);
            const double eff_tol = scaled_tol(tol, spectral_norm(re_df)) + 10.0 * fd.error_estimate;
            if (margin < -eff_tol) {
                CertWitness w;
                w.labels = {"X", "H"};
                w.tuples = {x, h};
                w.margin = margin;
                w.dim = n;
                w.trial = rep.trials_run - 1;
                rep.witness = std::move(w);
                rep.outcome = Outcome::violated;
                return rep;
            }

            if (t % 5 == 0) {
                // Amplification identity with a Hermitian V at level m = 2.
                const int m = 2;
                CMatrix v = gaussian_hermitian(m, rng);
                OperatorTuple x_amp = detail::kron_each(x, identity(m));
                OperatorTuple h_amp = detail::kron_each(h, v);
                try {
                    FdResult fd_amp = detail::fd_with_retries(f, x_amp, h_amp, h_step);
                    CMatrix expect = kron(fd.value, v);
                    const double resid =
                        max_abs(fd_amp.value - expect) / (1.0 + max_abs(expect));
                    rep.aux_residual = std::max(rep.aux_residual, resid);
                    if (resid > 1e-6) {
                        CertWitness w;
                        w.labels = {"X", "H"};
                        w.tuples = {x, h};
                        w.margin = -resid;
                        w.sub_test = "amplification";
                        w.dim = n;
                        w.trial = rep.trials_run - 1;
                        rep.witness = std::move(w);
                        rep.outcome = Outcome::violated;
                        rep.worst_margin = std::min(rep.worst_margin, -resid);
                        return rep;
                    }
                } catch (const StepSizeError&) {
                }
            }

            if (t % 7 == 0) {
                // Amplified positivity: H_psd (x) V_psd stays real positive, m in {2,3,4}.
                const int m = 2 + (t / 7) % 3;
                CMatrix v = random_psd(m, rng);
                OperatorTuple h_psd;
                for (int j = 0; j < f.arity; ++j) h_psd.push_back(random_psd(n, rng));
                OperatorTuple x_amp = detail::kron_each(x, identity(m));
                OperatorTuple h_amp = detail::kron_each(h_psd, v);
                try {
                    FdResult fd_amp = detail::fd_with_retries(f, x_amp, h_amp, h_step);
                    CMatrix re_amp = re_part(fd_amp.value);
                    const double m_amp = hermitian_eigenvalues(re_amp).minCoeff();
                    rep.worst_margin = std::min(rep.worst_margin, m_amp);
                    const double eff =
                        scaled_tol(tol, spectral_norm(re_amp)) + 10.0 * fd_amp.error_estimate;
                    if (m_amp < -eff) {
                        CertWitness w;
                        w.labels = {"X", "H"};
                        w.tuples = {x_amp, h_amp};
                        w.margin = m_amp;
                        w.sub_test = "amplified-positivity m=" + std::to_string(m);
                        w.dim = n * m;
                        w.trial = rep.trials_run - 1;
                        rep.witness = std::move(w);
                        rep.outcome = Outcome::violated;
                        return rep;
                    }
                } catch (const StepSizeError&) {
                }
            }
        }
    }
    return rep;
}

/// The derivative criterion at one fixed base point.
inline CertificateReport derivative_criterion_at(const FreeFunctionSpec& f, const OperatorTuple& x,
                                                 long trials, std::uint64_t seed, double tol = 1e-8,
                                                 double h_step = 1e-5) {
    validate(f);
    require_uniform(x, "derivative_criterion_at");
    if (!domain_contains(f, x)) throw DomainError("derivative_criterion_at: X outside domain");
    CertificateReport rep;
    rep.claim = Claim::derivative_cp;
    rep.spec_id = f.name;
    rep.dims = {static_cast<int>(x.front().rows())};
    rep.trials_requested = trials;
    rep.seed = seed;
    rep.tol = tol;
    const int n = static_cast<int>(x.front().rows());
    for (long t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x304, static_cast<std::uint64_t>(t)));
        OperatorTuple h;
        for (int j = 0; j < f.arity; ++j) {
            if (f.domain == Domain::hermitian_pd || t % 3 == 2)
                h.push_back(random_psd(n, rng));
            else if (t % 3 == 0)
                h.push_back(random_real_positive(n, rng, 0.05));
            else
                h.push_back(kImaginaryUnit * gaussian_hermitian(n, rng));
        }
        FdResult fd;
        try {
            fd = detail::fd_with_retries(f, x, h, h_step);
        } catch (const StepSizeError&) {
            continue;
        }
        ++rep.trials_run;
        CMatrix re_df = re_part(fd.value);
        const double margin = hermitian_eigenvalues(re_df).minCoeff();
        rep.worst_margin = std::min(rep.worst_margin, margin);
        const double eff = scaled_tol(tol, spectral_norm(re_df)) + 10.0 * fd.error_estimate;
        if (margin < -eff) {
            CertWitness w;
            w.labels = {"X", "H"};
            w.tuples = {x, h};
            w.margin = margin;
            w.dim = n;
            w.trial = rep.trials_run - 1;
            rep.witness = std::move(w);
            rep.outcome = Outcome::violated;
            return rep;
        }
    }
    return rep;
}

/// Tests whether Re F(Re X + i W) depends on W, and that the induced map
/// R |-> Re F(R) is operator monotone on Hermitian arguments. The first
/// probe per dimension is the deterministic pair W = 0, W' = I at X = I.
inline CertificateReport re_independence_test(const FreeFunctionSpec& f, const std::vector<int>& dims,
                                              long trials, std::uint64_t seed, double tol = 1e-8) {
    validate(f);
    if (dims.empty()) throw ConfigError("re_independence_test: dims must be non-empty");
    if (f.domain == Domain::hermitian_pd)
        throw ConfigError("re_independence_test: domain must contain non-Hermitian points");
    CertificateReport rep;
    rep.claim = Claim::re_independent;
    rep.spec_id = f.name;
    rep.dims = dims;
    rep.trials_requested = trials;
    rep.seed = seed;
    rep.tol = tol;

    const auto per_dim = detail::split_trials(trials, dims.size());
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const int n = dims[di];
        for (int t = 0; t < per_dim[di]; ++t) {
            Rng rng(mix_seed(seed, 0x305 + di, static_cast<std::uint64_t>(t)));
            OperatorTuple re_x, w1, w2;
            if (t == 0) {
                re_x = identity_tuple(n, static_cast<std::size_t>(f.arity));
                w1 = OperatorTuple(static_cast<std::size_t>(f.arity), CMatrix::Zero(n, n));
                w2 = identity_tuple(n, static_cast<std::size_t>(f.arity));
            } else {
                OperatorTuple x = detail::sample_domain_point(f, n, rng);
                re_x = re_part(x);
                for (int j = 0; j < f.arity; ++j) {
                    w1.push_back(gaussian_hermitian(n, rng));
                    w2.push_back(gaussian_hermitian(n, rng));
                }
            }
            OperatorTuple x1, x2;
            for (std::size_t i = 0; i < re_x.size(); ++i) {
                x1.push_back(re_x[i] + kImaginaryUnit * w1[i]);
                x2.push_back(re_x[i] + kImaginaryUnit * w2[i]);
            }
            CMatrix r1, r2;
            try {
                r1 = re_part(evaluate(f, x1));
                r2 = re_part(evaluate(f, x2));
            } catch (const DomainError&) {
                continue;
            }
            ++rep.trials_run;
            const double diff = spectral_norm(r1 - r2);
            rep.worst_margin = std::min(rep.worst_margin, -diff);
            if (diff > scaled_tol(tol, spectral_norm(r1))) {
                CertWitness w;
                w.labels = {"X1", "X2"};
                w.tuples = {x1, x2};
                w.margin = -diff;
                w.sub_test = "im-dependence";
                w.dim = n;
                w.trial = rep.trials_run - 1;
                rep.witness = std::move(w);
                rep.outcome = Outcome::violated;
                return rep;
            }
        }
    }

    // Induced Hermitian-part map must be operator monotone.
    CertificateReport induced =
        certify_monotone(hermitian_part_map(f), dims, trials, mix_seed(seed, 0x306), tol);
    rep.trials_run += induced.trials_run;
    if (induced.violated()) {
        rep.outcome = Outcome::violated;
        rep.worst_margin = std::min(rep.worst_margin, induced.worst_margin);
        rep.witness = induced.witness;
        rep.witness->sub_test = "induced-monotone";
    }
    return rep;
}

/// Affine model a0 I + sum_j a_j X_j fitted from 1x1 probes; the residual is
/// measured over seeded probe tuples at n in {1,2,3}. For domains excluding
/// zero, probes are taken around the shifted base point (1,...,1).
struct AffineFit {
    Complex a0{0.0, 0.0};
    std::vector<Complex> coeffs;
    double residual = 0.0;
    double base_shift = 0.0; // 0 when probing around zero, 1 otherwise
    bool center_ok = true;   // F(base) is a scalar matrix at n = 2
    double center_deviation = 0.0;
};

inline AffineFit affine_fit(const FreeFunctionSpec& f, int probes_per_dim, std::uint64_t seed) {
    validate(f);
    AffineFit fit;
    fit.base_shift = (f.domain == Domain::all) ? 0.0 : 1.0;
    const double b = fit.base_shift;
    const int k = f.arity;

    auto scalar_tuple = [&](int slot, double value) {
        OperatorTuple x(static_cast<std::size_t>(k), CMatrix::Constant(1, 1, Complex(b, 0.0)));
        if (slot >= 0) x[static_cast<std::size_t>(slot)](0, 0) = Complex(value, 0.0);
        return x;
    };

    const Complex f0 = evaluate(f, scalar_tuple(-1, b))(0, 0);
    Complex coeff_sum{0.0, 0.0};
    for (int j = 0; j < k; ++j) {
        const Complex fj = evaluate(f, scalar_tuple(j, b + 1.0))(0, 0);
        fit.coeffs.push_back(fj - f0);
        coeff_sum += fj - f0;
    }
    fit.a0 = f0 - b * coeff_sum;

    {
        // Rigidity of the center: F at the scalar base point of dimension 2
        // must be a multiple of the identity.
        OperatorTuple base2(static_cast<std::size_t>(k), b * identity(2));
        if (f.domain == Domain::all || b > 0) {
            CMatrix e = evaluate(f, base2);
            CMatrix dev = e - (e.trace() / 2.0) * identity(2);
            fit.center_deviation = max_abs(dev);
            fit.center_ok = fit.center_deviation <= 1e-8 * (1.0 + spectral_norm(e));
        }
    }

    for (int n = 1; n <= 3; ++n) {
        for (int p = 0; p < probes_per_dim; ++p) {
            Rng rng(mix_seed(seed, 0x307 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(p)));
            OperatorTuple x;
            try {
                x = detail::sample_domain_point(f, n, rng);
            } catch (const SamplingError&) {
                continue;
            }
            CMatrix fx;
            try {
                fx = evaluate(f, x);
            } catch (const DomainError&) {
                continue;
            }
            CMatrix model = fit.a0 * identity(n);
            for (int j = 0; j < k; ++j) model += fit.coeffs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            fit.residual = std::max(fit.residual, spectral_norm(fx - model) / (1.0 + spectral_norm(fx)));
        }
    }
    return fit;
}

/// The 2n x 2n unitary conjugation behind monotone => concave: builds V,
/// checks V*(A (+) B)V against its closed block form, and verifies the
/// domination by diag(lambda A + (1-lambda) B + eps I, 2Z) with
/// Z = D^2/eps + (1-lambda) Re A + lambda Re B.
struct BlockConstructionReport {
    double unitary_residual = 0.0;
    double conjugation_residual = 0.0;
    double domination_margin = 0.0;
    double lambda = 0.0;
    double eps = 0.0;
    bool pass = false;
};

inline BlockConstructionReport block_concavity_construction(const OperatorTuple& a, const OperatorTuple& b,
                                                            double lambda, double eps, double tol = 1e-8) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("block construction: lambda must be in (0,1)");
    if (!(eps > 0.0)) throw ParameterError("block construction: eps must be positive");
    if (a.size() != b.size()) throw ArityError("block construction: arity mismatch");
    require_uniform(a, "block_concavity_construction");
    require_uniform(b, "block_concavity_construction");
    if (a.front().rows() != b.front().rows())
        throw DimensionError("block construction: dimension mismatch");
    if (!in_P_re(a) || !in_P_re(b)) throw DomainError("block construction: A, B must lie in P_Re");

    const Eigen::Index n = a.front().rows();
    const double sl = std::sqrt(lambda), sm = std::sqrt(1.0 - lambda), c = sl * sm;
    CMatrix v(2 * n, 2 * n);
    v.topLeftCorner(n, n) = sl * identity(n);
    v.topRightCorner(n, n) = -sm * identity(n);
    v.bottomLeftCorner(n, n) = sm * identity(n);
    v.bottomRightCorner(n, n) = sl * identity(n);

    BlockConstructionReport rep;
    rep.lambda = lambda;
    rep.eps = eps;
    rep.unitary_residual = max_abs(v.adjoint() * v - identity(2 * n));
    rep.domination_margin = std::numeric_limits<double>::infinity();

    for (std::size_t j = 0; j < a.size(); ++j) {
        CMatrix m = v.adjoint() * direct_sum(a[j], b[j]) * v;
        CMatrix expected(2 * n, 2 * n);
        expected.topLeftCorner(n, n) = lambda * a[j] + (1.0 - lambda) * b[j];
        expected.topRightCorner(n, n) = c * (b[j] - a[j]);
        expected.bottomLeftCorner(n, n) = c * (b[j] - a[j]);
        expected.bottomRightCorner(n, n) = (1.0 - lambda) * a[j] + lambda * b[j];
        rep.conjugation_residual = std::max(
            rep.conjugation_residual, max_abs(m - expected) / (1.0 + max_abs(expected)));

        CMatrix d = -c * (re_part(b[j]) - re_part(a[j]));
        CMatrix z = d * d / eps + (1.0 - lambda) * re_part(a[j]) + lambda * re_part(b[j]);
        CMatrix target = direct_sum(lambda * a[j] + (1.0 - lambda) * b[j] + eps * identity(n), 2.0 * z);
        rep.domination_margin = std::min(rep.domination_margin, leq_with_base(m, target, tol).margin);
    }

    rep.pass = rep.unitary_residual <= 1e-12 && rep.conjugation_residual <= 1e-10 &&
               rep.domination_margin >= -scaled_tol(tol, 1.0 + tuple_norm(a) + tuple_norm(b));
    return rep;
}

/// Empirical continuity probe: on a ball where F is (sampled-)concave, the
/// observed Lipschitz ratio of Re F must stay below 2M/r.
struct LipschitzReport {
    bool hypothesis_met = false;
    double concavity_margin = 0.0;
    double m_bound = 0.0;
    double bound = 0.0;
    double max_ratio = 0.0;
    int samples = 0;
    bool pass = false;
};

inline LipschitzReport lipschitz_probe(const FreeFunctionSpec& f, const OperatorTuple& center, double r,
                                       long trials, std::uint64_t seed, double tol = 1e-8) {
    validate(f);
    require_uniform(center, "lipschitz_probe");
    if (static_cast<int>(center.size()) != f.arity) throw ArityError("lipschitz_probe: center arity");
    if (!(r > 0)) throw ParameterError("lipschitz_probe: radius must be positive");
    if (!domain_contains(f, center)) throw ParameterError("lipschitz_probe: center outside domain");
    const int n = static_cast<int>(center.front().rows());

    auto ball_point = [&](double radius, Rng& rng) {
        OperatorTuple d;
        d.reserve(center.size());
        for (std::size_t i = 0; i < center.size(); ++i) {
            CMatrix g = (f.domain == Domain::hermitian_pd)
                            ? gaussian_hermitian(n, rng)
                            : CMatrix(ginibre(n, n, rng));
            d.push_back(g);
        }
        const double s = tuple_norm(d);
        const double target = radius * rng.uniform();
        OperatorTuple p;
        p.reserve(center.size());
        for (std::size_t i = 0; i < center.size(); ++i)
            p.push_back(center[i] + (s > 0 ? target / s : 0.0) * d[i]);
        if (!domain_contains(f, p))
            throw ParameterError("lipschitz_probe: ball of radius 2r leaves the domain");
        return p;
    };

    LipschitzReport rep;
    const long spot = std::max<long>(8, trials / 4);

    // Hypothesis gate: concavity spot-check on the 2r ball.
    rep.hypothesis_met = true;
    rep.concavity_margin = std::numeric_limits<double>::infinity();
    for (long t = 0; t < spot; ++t) {
        Rng rng(mix_seed(seed, 0x308, static_cast<std::uint64_t>(t)));
        OperatorTuple p = ball_point(2.0 * r, rng);
        OperatorTuple q = ball_point(2.0 * r, rng);
        CMatrix fp = evaluate(f, p), fq = evaluate(f, q);
        for (double lam : {0.25, 0.5, 0.75}) {
            OperatorTuple mix;
            for (std::size_t i = 0; i < p.size(); ++i) mix.push_back((1.0 - lam) * p[i] + lam * q[i]);
            OrderVerdict v = leq_with_base((1.0 - lam) * fp + lam * fq, evaluate(f, mix), tol);
            rep.concavity_margin = std::min(rep.concavity_margin, v.margin);
            if (!v.holds) rep.hypothesis_met = false;
        }
        if (!rep.hypothesis_met) break;
    }
    if (!rep.hypothesis_met) return rep; // refuses to assert the bound

    double m_norm = 0.0;
    for (long t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x309, static_cast<std::uint64_t>(t)));
        OperatorTuple p = ball_point(2.0 * r, rng);
        m_norm = std::max(m_norm, spectral_norm(re_part(evaluate(f, p))));
    }
    rep.m_bound = m_norm;
    rep.bound = 2.0 * m_norm / r;

    for (long t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x30a, static_cast<std::uint64_t>(t)));
        OperatorTuple x = ball_point(r, rng);
        OperatorTuple y = ball_point(r, rng);
        OperatorTuple diff;
        for (std::size_t i = 0; i < x.size(); ++i) diff.push_back(y[i] - x[i]);
        const double dist = tuple_norm(diff);
        if (dist < 1e-12) continue;
        const double num = spectral_norm(re_part(evaluate(f, y)) - re_part(evaluate(f, x)));
        rep.max_ratio = std::max(rep.max_ratio, num / dist);
        ++rep.samples;
    }
    rep.pass = rep.max_ratio <= rep.bound + tol;
    return rep;
}

} // namespace realmono
