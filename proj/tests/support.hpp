#pragma once

#include <cmath>

#include "qread/cell.hpp"
#include "qread/qmat.hpp"
#include "qread/random_instances.hpp"
#include "qread/rng.hpp"

namespace qread::test {

inline Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline DensityOperator ket0() {
    return DensityOperator(diag2(1.0, 0.0));
}

inline DensityOperator ket1() {
    return DensityOperator(diag2(0.0, 1.0));
}

inline double binary_h(double p) {
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// 0.5 || a - b ||_1 for Hermitian a, b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
    const RealVector vals = detail::eigenvalues_herm(Matrix(a - b));
    return 0.5 * vals.cwiseAbs().sum();
}

}  // namespace qread::test
