#include "qread/random_instances.hpp"

#include <Eigen/QR>
#include <cmath>

namespace qread {

namespace {

Matrix gaussian_matrix(SplitMix64& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            // Box-Muller
            const double u1 = std::max(rng.uniform(), 1e-300);
            const double u2 = rng.uniform();
            const double u3 = std::max(rng.uniform(), 1e-300);
            const double u4 = rng.uniform();
            const double re = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            const double im = std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * M_PI * u4);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

}  // namespace

DensityOperator random_density(SplitMix64& rng, int dim, int rank) {
    const Matrix a = gaussian_matrix(rng, dim, rank);
    Matrix m = a * a.adjoint();
    m /= m.trace().real();
    return DensityOperator::trusted(std::move(m));
}

KrausChannel random_kraus_channel(SplitMix64& rng, int dim) {
    // Isometry V: dim -> dim (x) env, env = 2; Kraus blocks of V.
    const Matrix g = gaussian_matrix(rng, 2 * dim, dim);
    const Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(2 * dim, dim);
    std::vector<Matrix> kraus;
    kraus.push_back(q.topRows(dim));
    kraus.push_back(q.bottomRows(dim));
    return KrausChannel(std::move(kraus));
}

MemoryCell random_qubit_cell(SplitMix64& rng, double p_lo, double p_hi) {
    KrausChannel c0 = random_kraus_channel(rng);
    KrausChannel c1 = random_kraus_channel(rng);
    const double p = p_lo + (p_hi - p_lo) * rng.uniform();
    return MemoryCell(std::move(c0), std::move(c1), p);
}

ProbeState random_probe(SplitMix64& rng) {
    for (;;) {
        const double x = 2.0 * rng.uniform() - 1.0;
        const double y = 2.0 * rng.uniform() - 1.0;
        const double z = 2.0 * rng.uniform() - 1.0;
        if (x * x + y * y + z * z <= 1.0) {
            return ProbeState(x, y, z);
        }
    }
}

CqEnsemble random_cq_ensemble(SplitMix64& rng, int dim, double p_lo, double p_hi) {
    const int r0 = 1 + static_cast<int>(rng.uniform() * dim);
    const int r1 = 1 + static_cast<int>(rng.uniform() * dim);
    DensityOperator s0 = random_density(rng, dim, std::min(r0, dim));
    DensityOperator s1 = random_density(rng, dim, std::min(r1, dim));
    const double p = p_lo + (p_hi - p_lo) * rng.uniform();
    return CqEnsemble(p, std::move(s0), std::move(s1));
}

}  // namespace qread
