#pragma once

#include <functional>
#include <string>
#include <vector>

#include "realmono/matrix.hpp"
#include "realmono/real_order.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

/// A linear map on n x n matrices given by its action.
struct LinearMap {
    std::string name;
    int n = 0;
    std::function<CMatrix(const CMatrix&)> apply;
};

inline LinearMap identity_map(int n) {
    return {"identity", n, [](const CMatrix& x) { return x; }};
}

inline LinearMap transpose_map(int n) {
    return {"transpose", n, [](const CMatrix& x) { return x.transpose().eval(); }};
}

/// X -> sum_i V_i* X V_i.
inline LinearMap kraus_map(int n, std::vector<CMatrix> vs, std::string name = "kraus") {
    for (const auto& v : vs)
        if (v.rows() != n || v.cols() != n) throw DimensionError("kraus_map: factor shape");
    return {std::move(name), n, [vs = std::move(vs), n](const CMatrix& x) {
                CMatrix out = CMatrix::Zero(n, n);
                for (const auto& v : vs) out += v.adjoint() * x * v;
                return out;
            }};
}

/// X -> Re X; real-linear but not complex-linear, so the Choi construction
/// must reject it.
inline LinearMap hermitian_part_pseudomap(int n) {
    return {"re", n, [](const CMatrix& x) { return re_part(x); }};
}

/// Choi matrix C = sum_ij E_ij (x) L(E_ij) of a complex-linear map on M_n.
struct ChoiMatrix {
    int n = 0;
    CMatrix matrix; // n^2 x n^2
    std::string source;
    bool hermiticity_preserving = false;
};

inline ChoiMatrix choi_of_linear_map(const LinearMap& l, int n, std::uint64_t seed = 7) {
    if (n < 1) throw ConfigError("choi_of_linear_map: n must be >= 1");

    // Complex linearity gate: L(aX + bY) = a L(X) + b L(Y) on random inputs.
    Rng rng(mix_seed(seed, 0x501));
    for (int t = 0; t < 4; ++t) {
        CMatrix x = ginibre(n, n, rng), y = ginibre(n, n, rng);
        Complex a = rng.cgauss(), b = rng.cgauss();
        CMatrix lhs = l.apply(a * x + b * y);
        CMatrix rhs = a * l.apply(x) + b * l.apply(y);
        if (max_abs(lhs - rhs) > 1e-10 * (1.0 + max_abs(rhs)))
            throw ContractError("choi_of_linear_map: '" + l.name + "' is not complex-linear");
    }

    ChoiMatrix c;
    c.n = n;
    c.source = l.name;
    c.matrix = CMatrix::Zero(n * n, n * n);
    CMatrix unit = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            unit.setZero();
            unit(i, j) = 1.0;
            CMatrix img = l.apply(unit);
            if (img.rows() != n || img.cols() != n)
                throw ContractError("choi_of_linear_map: map does not preserve shape");
            c.matrix.block(i * n, j * n, n, n) = img;
        }
    }

    // Hermiticity preservation <=> Hermitian Choi matrix.
    bool herm = true;
    for (int t = 0; t < 4 && herm; ++t) {
        CMatrix h = gaussian_hermitian(n, rng);
        herm = is_hermitian(l.apply(h), 1e-10);
    }
    c.hermiticity_preserving = herm && is_hermitian(c.matrix, 1e-10);
    return c;
}

/// Complete-positivity test: CP iff the Choi matrix is PSD. On success the
/// Kraus factors come from the eigendecomposition (columns unstacked
/// column-major), and the residual of rebuilding C from them is reported.
struct CpResult {
    OrderVerdict verdict;           // margin = smallest Choi eigenvalue
    std::vector<CMatrix> kraus;     // present when CP
    double reconstruction_residual = 0.0;
};

inline CpResult is_cp(const ChoiMatrix& c, double tol = -1.0) {
    require_square(c.matrix, "is_cp");
    if (!c.hermiticity_preserving || !is_hermitian(c.matrix, 1e-10)) {
        CpResult out;
        out.verdict.holds = false;
        out.verdict.margin = -std::numeric_limits<double>::infinity();
        return out; // not even Hermiticity-preserving, so certainly not CP
    }
    const double eff_tol = tol >= 0 ? tol : default_psd_tol(c.matrix);
    auto es = detail::herm_eigs(c.matrix);
    const RVector& ev = es.eigenvalues();

    CpResult out;
    out.verdict.margin = ev.minCoeff();
    out.verdict.holds = out.verdict.margin >= -eff_tol;
    if (!out.verdict.holds) {
        Eigen::Index idx = 0;
        ev.minCoeff(&idx);
        out.verdict.witness_vector = es.eigenvectors().col(idx);
        return out;
    }

    const int n = c.n;
    CMatrix rebuilt = CMatrix::Zero(n * n, n * n);
    for (Eigen::Index a = 0; a < ev.size(); ++a) {
        if (ev(a) <= eff_tol) continue;
        CVector col = es.eigenvectors().col(a);
        CMatrix k(n, n);
        for (int i = 0; i < n; ++i)      // column index of K
            for (int r = 0; r < n; ++r)  // row index of K
                k(r, i) = std::sqrt(ev(a)) * col(i * n + r);
        out.kraus.push_back(k);
        CVector w = col * std::sqrt(ev(a));
        rebuilt += w * w.adjoint();
    }
    out.reconstruction_residual = max_abs(c.matrix - rebuilt) / (1.0 + max_abs(c.matrix));
    return out;
}

/// Applies id_m (x) L to a block matrix in M_m (x) M_n (test oracle for the
/// definition of complete positivity).
inline CMatrix amplified_apply(const LinearMap& l, int m, const CMatrix& block) {
    const int n = l.n;
    if (block.rows() != m * n || block.cols() != m * n)
        throw DimensionError("amplified_apply: block shape");
    CMatrix out(m * n, m * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.block(i * n, j * n, n, n) = l.apply(block.block(i * n, j * n, n, n));
    return out;
}

} // namespace realmono
