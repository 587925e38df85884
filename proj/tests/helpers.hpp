#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "realmono/matrix.hpp"

namespace rmtest {

using realmono::CMatrix;
using realmono::Complex;

inline CMatrix mat1(Complex a) { return CMatrix::Constant(1, 1, a); }

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline double entry_dist(const CMatrix& x, const CMatrix& y) {
    REQUIRE(x.rows() == y.rows());
    REQUIRE(x.cols() == y.cols());
    return realmono::max_abs(x - y);
}

inline void check_close(const CMatrix& x, const CMatrix& y, double tol = 1e-12) {
    REQUIRE(entry_dist(x, y) <= tol);
}

} // namespace rmtest
