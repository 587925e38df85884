#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "realmono/errors.hpp"

namespace realmono {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Ordered k-tuple of same-size square matrices, the variable X = (X_1,...,X_k).
using OperatorTuple = std::vector<CMatrix>;

inline constexpr Complex kImaginaryUnit{0.0, 1.0};

inline void require_square(const CMatrix& x, const char* where) {
    if (x.rows() != x.cols() || x.rows() == 0)
        throw DimensionError(std::string(where) + ": matrix must be square and nonempty, got " +
                             std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
}

inline void require_same_shape(const CMatrix& a, const CMatrix& b, const char* where) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(where) + ": shape mismatch");
}

/// All items square and of the same dimension; k >= 1.
inline void require_uniform(const OperatorTuple& xs, const char* where) {
    if (xs.empty()) throw ArityError(std::string(where) + ": empty tuple");
    require_square(xs.front(), where);
    const auto n = xs.front().rows();
    for (const auto& x : xs) {
        require_square(x, where);
        if (x.rows() != n)
            throw DimensionError(std::string(where) + ": tuple items have mixed dimensions");
    }
}

inline bool all_finite(const CMatrix& x) { return x.allFinite(); }

/// Largest singular value.
inline double spectral_norm(const CMatrix& x) {
    if (x.size() == 0) return 0.0;
    return x.jacobiSvd().singularValues()(0);
}

/// Max spectral norm over tuple components (the norm used for tuple balls).
inline double tuple_norm(const OperatorTuple& xs) {
    double m = 0.0;
    for (const auto& x : xs) m = std::max(m, spectral_norm(x));
    return m;
}

inline double max_abs(const CMatrix& x) { return x.cwiseAbs().maxCoeff(); }

/// Hermitian within tolerance 1e-12 * (1 + spectral norm).
inline bool is_hermitian(const CMatrix& x, double rel_tol = 1e-12) {
    if (x.rows() != x.cols()) return false;
    const double dev = max_abs(x - x.adjoint());
    return dev <= rel_tol * (1.0 + spectral_norm(x));
}

/// Hermitian part (X + X*)/2. Exactly Hermitian entrywise.
inline CMatrix re_part(const CMatrix& x) {
    require_square(x, "re_part");
    return (x + x.adjoint()) / 2.0;
}

/// Skew part divided by i: Im X = (X - X*)/(2i); X == re_part(X) + i*im_part(X).
inline CMatrix im_part(const CMatrix& x) {
    require_square(x, "im_part");
    return (x - x.adjoint()) / Complex(0.0, 2.0);
}

inline OperatorTuple re_part(const OperatorTuple& xs) {
    OperatorTuple out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(re_part(x));
    return out;
}

inline OperatorTuple im_part(const OperatorTuple& xs) {
    OperatorTuple out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(im_part(x));
    return out;
}

/// Scale-aware PSD tolerance: 1e-8 * max(1, spectral norm).
inline double default_psd_tol(const CMatrix& h) {
    return 1e-8 * std::max(1.0, spectral_norm(h));
}

namespace detail {
// Symmetrize before eigensolves; inputs are only Hermitian up to round-off.
inline Eigen::SelfAdjointEigenSolver<CMatrix> herm_eigs(const CMatrix& h) {
    CMatrix s = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
    if (es.info() != Eigen::Success)
        throw InvariantError("herm_eigs: eigensolver failed to converge");
    return es;
}
} // namespace detail

inline RVector hermitian_eigenvalues(const CMatrix& h) {
    require_square(h, "hermitian_eigenvalues");
    return detail::herm_eigs(h).eigenvalues();
}

/// Smallest eigenvalue of a Hermitian matrix with its eigenvector.
inline std::pair<double, CVector> min_eig_hermitian(const CMatrix& h) {
    require_square(h, "min_eig_hermitian");
    auto es = detail::herm_eigs(h);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

/// PSD verdict for a Hermitian matrix: margin = smallest eigenvalue,
/// verdict = (margin >= -tol). Non-Hermitian input is an invariant violation.
inline std::pair<bool, double> is_psd(const CMatrix& h, double tol) {
    require_square(h, "is_psd");
    if (!is_hermitian(h)) throw InvariantError("is_psd: input is not Hermitian");
    const double margin = hermitian_eigenvalues(h).minCoeff();
    return {margin >= -tol, margin};
}

inline std::pair<bool, double> is_psd(const CMatrix& h) { return is_psd(h, default_psd_tol(h)); }

/// Principal (PSD) square root of a Hermitian PSD matrix via spectral decomposition.
/// Eigenvalues in [-tol, 0) are clipped to zero; anything below -tol is a domain error.
inline CMatrix sqrt_psd(const CMatrix& h) {
    require_square(h, "sqrt_psd");
    if (!is_hermitian(h)) throw InvariantError("sqrt_psd: input is not Hermitian");
    auto es = detail::herm_eigs(h);
    RVector ev = es.eigenvalues();
    const double tol = default_psd_tol(h);
    RVector root(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol)
            throw DomainError("sqrt_psd: eigenvalue " + std::to_string(ev(i)) + " below -tol");
        root(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    const CMatrix& u = es.eigenvectors();
    return u * root.asDiagonal() * u.adjoint();
}

/// Block-diagonal stacking of two square matrices.
inline CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
    require_square(a, "direct_sum");
    require_square(b, "direct_sum");
    CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

/// Componentwise direct sum of tuples with equal arity.
inline OperatorTuple direct_sum(const OperatorTuple& a, const OperatorTuple& b) {
    if (a.size() != b.size()) throw ArityError("direct_sum: tuples have different arity");
    require_uniform(a, "direct_sum");
    require_uniform(b, "direct_sum");
    OperatorTuple out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(direct_sum(a[i], b[i]));
    return out;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

inline OperatorTuple identity_tuple(Eigen::Index n, std::size_t k) {
    return OperatorTuple(k, identity(n));
}

/// Inverse through LU with an explicit invertibility gate.
inline CMatrix safe_inverse(const CMatrix& x, const char* where = "inverse") {
    require_square(x, where);
    Eigen::FullPivLU<CMatrix> lu(x);
    if (!lu.isInvertible())
        throw DomainError(std::string(where) + ": matrix is numerically singular");
    return lu.inverse();
}

inline OperatorTuple operator+(const OperatorTuple& a, const OperatorTuple& b) {
    if (a.size() != b.size()) throw ArityError("tuple +: arity mismatch");
    OperatorTuple out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

inline OperatorTuple operator-(const OperatorTuple& a, const OperatorTuple& b) {
    if (a.size() != b.size()) throw ArityError("tuple -: arity mismatch");
    OperatorTuple out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

inline OperatorTuple operator*(double s, const OperatorTuple& a) {
    OperatorTuple out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(s * x);
    return out;
}

} // namespace realmono
