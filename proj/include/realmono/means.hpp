#pragma once

#include <string>

#include "realmono/matrix.hpp"
#include "realmono/real_order.hpp"

namespace realmono {

/// Principal matrix square root via complex Schur decomposition and the
/// upper-triangular recursion. Defined for matrices whose spectrum avoids
/// the closed negative real axis; the result has spectrum in the open
/// right half-plane.
inline CMatrix principal_sqrt(const CMatrix& m) {
    require_square(m, "principal_sqrt");
    const Eigen::Index n = m.rows();
    Eigen::ComplexSchur<CMatrix> schur(m);
    if (schur.info() != Eigen::Success)
        throw DomainError("principal_sqrt: Schur decomposition failed");
    const CMatrix& t = schur.matrixT();
    const CMatrix& u = schur.matrixU();

    const double scale = std::max(1.0, max_abs(t));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lam = t(i, i);
        if (lam.real() <= 0.0 && std::abs(lam.imag()) <= 1e-14 * scale)
            throw DomainError("principal_sqrt: eigenvalue on the closed negative real axis");
    }

    CMatrix s = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) s(i, i) = std::sqrt(t(i, i));
    for (Eigen::Index d = 1; d < n; ++d) {
        for (Eigen::Index i = 0; i + d < n; ++i) {
            const Eigen::Index j = i + d;
            Complex sum = t(i, j);
            for (Eigen::Index k = i + 1; k < j; ++k) sum -= s(i, k) * s(k, j);
            s(i, j) = sum / (s(i, i) + s(j, j));
        }
    }
    return u * s * u.adjoint();
}

enum class MeanKind { arithmetic, harmonic, geometric };

inline MeanKind parse_mean_kind(const std::string& s) {
    if (s == "arithmetic") return MeanKind::arithmetic;
    if (s == "harmonic") return MeanKind::harmonic;
    if (s == "geometric") return MeanKind::geometric;
    throw ConfigError("unknown mean kind: " + s);
}

namespace detail {
inline void require_accretive_pd(const CMatrix& x, const char* where) {
    CMatrix h = re_part(x);
    if (hermitian_eigenvalues(h).minCoeff() <= default_psd_tol(h))
        throw DomainError(std::string(where) + ": Re part is not positive definite");
}
} // namespace detail

/// Two-variable matrix means. Geometric uses the formula
/// A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2} with principal square roots;
/// for accretive A, B the inner matrix has spectrum off the closed negative
/// axis, so the principal branch is well defined even when it is not Hermitian.
inline CMatrix mean(MeanKind kind, const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "mean");
    require_square(a, "mean");
    switch (kind) {
        case MeanKind::arithmetic:
            return (a + b) / 2.0;
        case MeanKind::harmonic: {
            detail::require_accretive_pd(a, "harmonic mean");
            detail::require_accretive_pd(b, "harmonic mean");
            return 2.0 * safe_inverse(safe_inverse(a, "harmonic mean") + safe_inverse(b, "harmonic mean"),
                                      "harmonic mean");
        }
        case MeanKind::geometric: {
            detail::require_accretive_pd(a, "geometric mean");
            detail::require_accretive_pd(b, "geometric mean");
            CMatrix ra = principal_sqrt(a);
            CMatrix ra_inv = safe_inverse(ra, "geometric mean");
            CMatrix inner = principal_sqrt(ra_inv * b * ra_inv);
            return ra * inner * ra;
        }
    }
    throw ConfigError("mean: invalid kind");
}

/// Feasibility/maximality probe of the block-matrix characterization of the
/// geometric mean: with G = A#B the block [[A,G],[G,B]] is PSD while
/// inflating G by eps*I makes it lose positivity.
struct MaxCharReport {
    double feasible_margin = 0.0;   // smallest eigenvalue of [[A,G],[G,B]]
    bool feasible = false;          // feasible_margin >= -tol
    double inflated_margin = 0.0;   // smallest eigenvalue with G + eps*I
    bool inflated_infeasible = false;
    double eps = 0.0;
    double tol = 0.0;
};

inline MaxCharReport verify_max_characterization(const CMatrix& a, const CMatrix& b, const CMatrix& g,
                                                 double eps = 1e-3, double tol = -1.0) {
    require_square(a, "verify_max_characterization");
    require_same_shape(a, b, "verify_max_characterization");
    require_same_shape(a, g, "verify_max_characterization");
    if (!is_hermitian(a, 1e-10) || !is_hermitian(b, 1e-10))
        throw DomainError("verify_max_characterization: A, B must be Hermitian");
    if (hermitian_eigenvalues(a).minCoeff() <= 0 || hermitian_eigenvalues(b).minCoeff() <= 0)
        throw DomainError("verify_max_characterization: A, B must be positive definite");

    // Candidate means from the formula are Hermitian only up to round-off.
    CMatrix gs = (g + g.adjoint()) / 2.0;
    const Eigen::Index n = a.rows();
    auto block = [&](const CMatrix& x) {
        CMatrix m(2 * n, 2 * n);
        m.topLeftCorner(n, n) = (a + a.adjoint()) / 2.0;
        m.bottomRightCorner(n, n) = (b + b.adjoint()) / 2.0;
        m.topRightCorner(n, n) = x;
        m.bottomLeftCorner(n, n) = x.adjoint();
        return m;
    };

    MaxCharReport rep;
    CMatrix feas = block(gs);
    rep.tol = tol >= 0 ? tol : default_psd_tol(feas);
    rep.eps = eps;
    rep.feasible_margin = hermitian_eigenvalues(feas).minCoeff();
    rep.feasible = rep.feasible_margin >= -rep.tol;
    rep.inflated_margin = hermitian_eigenvalues(block(gs + eps * identity(n))).minCoeff();
    rep.inflated_infeasible = rep.inflated_margin < -1e-10;
    return rep;
}

/// Order verdicts for harmonic <=_Re geometric <=_Re arithmetic on one pair.
/// Classical for Hermitian PD inputs; fails for general accretive inputs.
struct AghReport {
    CMatrix harmonic, geometric, arithmetic;
    OrderVerdict h_le_g, g_le_a;
    bool hermitian_inputs = false;
    bool all_hold() const { return h_le_g.holds && g_le_a.holds; }
    double worst_margin() const { return std::min(h_le_g.margin, g_le_a.margin); }
};

inline AghReport agh_probe(const CMatrix& a, const CMatrix& b, double tol = -1.0) {
    detail::require_accretive_pd(a, "agh_probe");
    detail::require_accretive_pd(b, "agh_probe");
    AghReport rep;
    rep.harmonic = mean(MeanKind::harmonic, a, b);
    rep.geometric = mean(MeanKind::geometric, a, b);
    rep.arithmetic = mean(MeanKind::arithmetic, a, b);
    rep.hermitian_inputs = is_hermitian(a, 1e-10) && is_hermitian(b, 1e-10);
    if (tol >= 0) {
        rep.h_le_g = real_leq(rep.harmonic, rep.geometric, tol);
        rep.g_le_a = real_leq(rep.geometric, rep.arithmetic, tol);
    } else {
        rep.h_le_g = real_leq(rep.harmonic, rep.geometric);
        rep.g_le_a = real_leq(rep.geometric, rep.arithmetic);
    }
    return rep;
}

} // namespace realmono
