#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "realmono/matrix.hpp"

namespace realmono {

/// Stateless seed mixing (splitmix64) so independent trials can derive
/// their own generators in any execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial = 0) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gauss() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }

    /// Standard complex Gaussian, E|z|^2 = 1.
    Complex cgauss() { return Complex(gauss(), gauss()) / std::sqrt(2.0); }

    std::mt19937_64& raw() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Complex Ginibre matrix: i.i.d. standard complex Gaussian entries.
inline CMatrix ginibre(int rows, int cols, Rng& rng) {
    CMatrix w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.cgauss();
    return w;
}

/// Gaussian Hermitian matrix (G + G*)/2 with G Ginibre, scaled.
inline CMatrix gaussian_hermitian(int n, Rng& rng, double scale = 1.0) {
    CMatrix g = ginibre(n, n, rng);
    return scale * (g + g.adjoint()) / 2.0;
}

/// Haar-like unitary from QR of a Ginibre matrix with phase correction.
inline CMatrix random_unitary(int n, Rng& rng) {
    CMatrix g = ginibre(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

/// Isometry C^m -> C^n (n x m with U*U = I_m), m <= n: truncated unitary.
inline CMatrix random_isometry(int n, int m, Rng& rng) {
    if (m < 1 || m > n) throw ParameterError("random_isometry: need 1 <= m <= n");
    return random_unitary(n, rng).leftCols(m);
}

/// Contraction: random matrix rescaled to operator norm <= norm_cap.
inline CMatrix random_contraction(int n, Rng& rng, double norm_cap = 1.0) {
    CMatrix g = ginibre(n, n, rng);
    double s = spectral_norm(g);
    if (s > 0) g *= (norm_cap * (0.2 + 0.8 * rng.uniform())) / s;
    return g;
}

/// Member of P_Re with quantified margin: Re = W*W + delta*I (W Ginibre),
/// Im an independent Hermitian Gaussian.
inline CMatrix random_real_positive(int n, Rng& rng, double delta = 0.1, double im_scale = 1.0) {
    CMatrix w = ginibre(n, n, rng);
    CMatrix re = w.adjoint() * w / double(n) + delta * identity(n);
    CMatrix im = gaussian_hermitian(n, rng, im_scale);
    return re + kImaginaryUnit * im;
}

/// Hermitian PSD with margin >= delta.
inline CMatrix random_psd(int n, Rng& rng, double delta = 0.0) {
    CMatrix w = ginibre(n, n, rng);
    return w.adjoint() * w / double(n) + delta * identity(n);
}

/// Invertible matrix with condition number <= cond_cap, via U * diag(s) * V.
inline CMatrix random_invertible(int n, Rng& rng, double cond_cap = 10.0) {
    CMatrix u = random_unitary(n, rng);
    CMatrix v = random_unitary(n, rng);
    RVector s(n);
    const double lo = 1.0 / std::sqrt(cond_cap), hi = std::sqrt(cond_cap);
    for (int i = 0; i < n; ++i) s(i) = lo * std::pow(hi / lo, rng.uniform());
    return u * s.asDiagonal() * v;
}

enum class SampleKind { hermitian, unitary, isometry, real_positive, psd_pair_ordered };

inline SampleKind parse_sample_kind(const std::string& s) {
    if (s == "hermitian") return SampleKind::hermitian;
    if (s == "unitary") return SampleKind::unitary;
    if (s == "isometry") return SampleKind::isometry;
    if (s == "real_positive") return SampleKind::real_positive;
    if (s == "psd_pair_ordered") return SampleKind::psd_pair_ordered;
    throw ConfigError("unknown sample kind: " + s);
}

/// Deterministic seeded tuple generation. Notes:
///  - isometry items are n x (n-1) (n x 1 when n == 1), the one non-square kind;
///  - psd_pair_ordered returns 2k items: first the k components of A, then the k
///    components of B with B_j - A_j PSD.
inline OperatorTuple sample(SampleKind kind, int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) throw ConfigError("sample: need n >= 1 and k >= 1");
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(kind)));
    OperatorTuple out;
    switch (kind) {
        case SampleKind::hermitian:
            for (int j = 0; j < k; ++j) out.push_back(gaussian_hermitian(n, rng));
            break;
        case SampleKind::unitary:
            for (int j = 0; j < k; ++j) out.push_back(random_unitary(n, rng));
            break;
        case SampleKind::isometry:
            for (int j = 0; j < k; ++j) out.push_back(random_isometry(n, std::max(1, n - 1), rng));
            break;
        case SampleKind::real_positive:
            for (int j = 0; j < k; ++j) out.push_back(random_real_positive(n, rng));
            break;
        case SampleKind::psd_pair_ordered: {
            OperatorTuple a, b;
            for (int j = 0; j < k; ++j) {
                CMatrix aj = random_psd(n, rng, 0.05);
                CMatrix inc = random_psd(n, rng);
                a.push_back(aj);
                b.push_back(aj + inc);
            }
            out = std::move(a);
            out.insert(out.end(), b.begin(), b.end());
            break;
        }
    }
    return out;
}

} // namespace realmono
