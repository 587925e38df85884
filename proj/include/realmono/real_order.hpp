#pragma once

#include <optional>

#include "realmono/matrix.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

/// Verdict on a real-positive-order comparison. margin is the smallest
/// eigenvalue of the relevant Hermitian part; on failure witness_vector v
/// satisfies <v, Re(difference) v> = margin.
struct OrderVerdict {
    bool holds = false;
    double margin = 0.0;
    std::optional<CVector> witness_vector;
    int witness_index = -1; // offending tuple component, -1 for single matrices

    explicit operator bool() const { return holds; }
};

namespace detail {
inline OrderVerdict verdict_from_hermitian(const CMatrix& h, double tol, int index = -1) {
    auto [margin, vec] = min_eig_hermitian(h);
    OrderVerdict v;
    v.margin = margin;
    v.holds = margin >= -tol;
    if (!v.holds) {
        v.witness_vector = vec;
        v.witness_index = index;
    }
    return v;
}
} // namespace detail

/// X >=_Re 0, i.e. Re(X) PSD within tol.
inline OrderVerdict is_real_positive(const CMatrix& x, double tol) {
    require_square(x, "is_real_positive");
    return detail::verdict_from_hermitian(re_part(x), tol);
}

inline OrderVerdict is_real_positive(const CMatrix& x) {
    CMatrix h = re_part(x);
    return detail::verdict_from_hermitian(h, default_psd_tol(h));
}

/// Strict membership in P_Re: every item has Re part positive definite
/// (smallest eigenvalue > tol).
inline bool in_P_re(const OperatorTuple& xs, double tol) {
    require_uniform(xs, "in_P_re");
    for (const auto& x : xs)
        if (hermitian_eigenvalues(re_part(x)).minCoeff() <= tol) return false;
    return true;
}

inline bool in_P_re(const OperatorTuple& xs) {
    require_uniform(xs, "in_P_re");
    for (const auto& x : xs) {
        CMatrix h = re_part(x);
        if (hermitian_eigenvalues(h).minCoeff() <= default_psd_tol(h)) return false;
    }
    return true;
}

/// A <=_Re B, meaning Re(B - A) is PSD. This is only a preorder: both
/// directions hold whenever Re A = Re B.
inline OrderVerdict real_leq(const CMatrix& a, const CMatrix& b, double tol) {
    require_same_shape(a, b, "real_leq");
    require_square(a, "real_leq");
    return detail::verdict_from_hermitian(re_part(b - a), tol);
}

inline OrderVerdict real_leq(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "real_leq");
    require_square(a, "real_leq");
    CMatrix h = re_part(b - a);
    return detail::verdict_from_hermitian(h, default_psd_tol(h));
}

/// Tuple order: A <=_Re B iff every component satisfies A_i <=_Re B_i;
/// margin is the minimum over components.
inline OrderVerdict real_leq(const OperatorTuple& a, const OperatorTuple& b, double tol) {
    if (a.size() != b.size()) throw DimensionError("real_leq: tuple arity mismatch");
    require_uniform(a, "real_leq");
    require_uniform(b, "real_leq");
    if (a.front().rows() != b.front().rows())
        throw DimensionError("real_leq: tuple dimension mismatch");
    OrderVerdict worst;
    worst.holds = true;
    worst.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        CMatrix h = re_part(b[i] - a[i]);
        OrderVerdict v = detail::verdict_from_hermitian(h, tol, static_cast<int>(i));
        if (v.margin < worst.margin) {
            worst.margin = v.margin;
            worst.witness_vector = v.witness_vector;
            worst.witness_index = v.witness_index;
        }
        worst.holds = worst.holds && v.holds;
    }
    return worst;
}

inline OrderVerdict real_leq(const OperatorTuple& a, const OperatorTuple& b) {
    if (a.size() != b.size()) throw DimensionError("real_leq: tuple arity mismatch");
    require_uniform(a, "real_leq");
    require_uniform(b, "real_leq");
    if (a.front().rows() != b.front().rows())
        throw DimensionError("real_leq: tuple dimension mismatch");
    double tol = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) tol = std::max(tol, default_psd_tol(re_part(b[i] - a[i])));
    return real_leq(a, b, tol);
}

/// Seeded pair (A, B) with both in P_Re and A <=_Re B: B = A + P where the
/// increment P has PSD Re part and an independent Hermitian imaginary part
/// (the order does not constrain imaginary parts).
inline std::pair<OperatorTuple, OperatorTuple> sample_ordered_pair(int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) throw ConfigError("sample_ordered_pair: need n >= 1 and k >= 1");
    Rng rng(mix_seed(seed, 0x0bdULL));
    OperatorTuple a, b;
    a.reserve(k);
    b.reserve(k);
    for (int j = 0; j < k; ++j) {
        CMatrix base = random_real_positive(n, rng);
        CMatrix inc_re = random_psd(n, rng);
        CMatrix inc_im = gaussian_hermitian(n, rng);
        a.push_back(base);
        b.push_back(base + inc_re + kImaginaryUnit * inc_im);
    }
    return {a, b};
}

} // namespace realmono
