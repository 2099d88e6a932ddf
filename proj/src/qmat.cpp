#include "qread/qmat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qread {

namespace {

std::string herm_violation_message(const Matrix& m) {
    double worst = 0.0;
    int wj = 0, wk = 0;
    for (int j = 0; j < m.rows(); ++j) {
        for (int k = j; k < m.cols(); ++k) {
            const double dev = std::abs(m(j, k) - std::conj(m(k, j)));
            if (dev > worst) {
                worst = dev;
                wj = j;
                wk = k;
            }
        }
    }
    return "matrix is not Hermitian: entries (" + std::to_string(wj) + "," + std::to_string(wk) +
           ") and (" + std::to_string(wk) + "," + std::to_string(wj) + ") deviate by " +
           std::to_string(worst);
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("HermitianOperator requires a non-empty square matrix");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (((m - m.adjoint()).cwiseAbs().maxCoeff()) > kHermTol * scale) {
        throw std::invalid_argument(herm_violation_message(m));
    }
    mat_ = 0.5 * (m + m.adjoint());
}

HermitianOperator::HermitianOperator(Matrix m, Trusted) : mat_(std::move(m)) {}

HermitianOperator HermitianOperator::trusted(Matrix m) {
    Matrix sym = 0.5 * (m + m.adjoint());
    return HermitianOperator(std::move(sym), Trusted{});
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
    const RealVector evs = detail::eigenvalues_herm(op_.matrix());
    if (evs.minCoeff() < -kPsdClip) {
        throw std::invalid_argument("DensityOperator violates positivity: eigenvalue " +
                                    std::to_string(evs.minCoeff()));
    }
    const double tr = op_.trace();
    if (std::abs(tr - 1.0) > 1e-10) {
        throw std::invalid_argument("DensityOperator trace is " + std::to_string(tr) +
                                    ", expected 1");
    }
}

DensityOperator::DensityOperator(Matrix m, Trusted)
    : op_(HermitianOperator::trusted(std::move(m))) {}

DensityOperator DensityOperator::trusted(Matrix m) {
    return DensityOperator(std::move(m), Trusted{});
}

EigenSystem hermitian_eigs(const HermitianOperator& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed to converge");
    }
    const int d = m.dim();
    EigenSystem out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = Matrix(d, d);
    for (int k = 0; k < d; ++k) {
        out.vectors.col(k) = solver.eigenvectors().col(d - 1 - k);
    }
    return out;
}

HermitianOperator matrix_sqrt(const HermitianOperator& m, double psd_clip) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    RealVector vals = solver.eigenvalues();
    for (int k = 0; k < vals.size(); ++k) {
        if (vals[k] < -psd_clip) {
            throw std::invalid_argument("matrix_sqrt: PSD violation, eigenvalue " +
                                        std::to_string(vals[k]));
        }
        vals[k] = std::sqrt(std::max(vals[k], 0.0));
    }
    const Matrix& v = solver.eigenvectors();
    return HermitianOperator::trusted(v * vals.asDiagonal() * v.adjoint());
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch " + std::to_string(rho.dim()) +
                                    " vs " + std::to_string(sigma.dim()));
    }
    return detail::fidelity_m(rho.matrix(), sigma.matrix());
}

double von_neumann_entropy(const DensityOperator& rho) {
    return detail::entropy_bits(rho.matrix());
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator::trusted(detail::kron(a.matrix(), b.matrix()));
}

HermitianOperator pinv_sqrt(const HermitianOperator& m, double support_cut) {
    return HermitianOperator::trusted(detail::pinv_sqrt_m(m.matrix(), support_cut));
}

namespace detail {

bool is_diagonal(const Matrix& m) {
    for (int j = 0; j < m.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != Complex(0.0, 0.0)) {
                return false;
            }
        }
    }
    return true;
}

Matrix sandwich_product(const Matrix& a, const Matrix& b) {
    if (is_diagonal(a) && is_diagonal(b)) {
        Matrix out = Matrix::Zero(a.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i) {
            out(i, i) = a(i, i) * b(i, i) * a(i, i);
        }
        return out;
    }
    return a * b * a;
}

Matrix sqrt_psd(const Matrix& m) {
    if (is_diagonal(m)) {
        Matrix out = Matrix::Zero(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i) {
            out(i, i) = std::sqrt(std::max(m(i, i).real(), 0.0));
        }
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    RealVector vals = solver.eigenvalues();
    // Eigenvalues at the numerical-rank floor are noise; taking their square
    // root would inject O(sqrt(eps)) error into rank-deficient inputs.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(vals[0]), std::abs(vals[vals.size() - 1]));
    for (int k = 0; k < vals.size(); ++k) {
        vals[k] = vals[k] > floor ? std::sqrt(vals[k]) : 0.0;
    }
    return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix pinv_sqrt_m(const Matrix& m, double support_cut) {
    if (is_diagonal(m)) {
        Matrix out = Matrix::Zero(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i) {
            const double v = m(i, i).real();
            out(i, i) = v > support_cut ? 1.0 / std::sqrt(v) : 0.0;
        }
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    const RealVector& vals = solver.eigenvalues();
    RealVector inv(vals.size());
    for (int k = 0; k < vals.size(); ++k) {
        inv[k] = vals[k] > support_cut ? 1.0 / std::sqrt(vals[k]) : 0.0;
    }
    return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
}

double fidelity_m(const Matrix& a, const Matrix& b) {
    if (is_diagonal(a) && is_diagonal(b)) {
        double f = 0.0;
        for (int i = 0; i < a.rows(); ++i) {
            f += std::sqrt(std::max(a(i, i).real(), 0.0) * std::max(b(i, i).real(), 0.0));
        }
        return f;
    }
    const Matrix prod = sqrt_psd(a) * sqrt_psd(b);
    if (prod.rows() >= 32) {
        return Eigen::BDCSVD<Matrix>(prod).singularValues().sum();
    }
    return prod.jacobiSvd().singularValues().sum();
}

double entropy_bits(const Matrix& m) {
    const RealVector vals = eigenvalues_herm(m);
    double h = 0.0;
    for (int k = 0; k < vals.size(); ++k) {
        if (vals[k] > 0.0) {
            h -= vals[k] * std::log2(vals[k]);
        }
    }
    return h;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

RealVector eigenvalues_herm(const Matrix& m) {
    if (is_diagonal(m)) {
        return m.diagonal().real();  // unsorted
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double trace_product_herm(const Matrix& a, const Matrix& b) {
    // Tr(AB) = sum_ij A_ij conj(B_ij) when B is Hermitian.
    return a.cwiseProduct(b.conjugate()).sum().real();
}

double pooled_entropy_bits(const std::vector<const Matrix*>& blocks) {
    double h = 0.0;
    for (const Matrix* blk : blocks) {
        const RealVector vals = eigenvalues_herm(*blk);
        for (int k = 0; k < vals.size(); ++k) {
            if (vals[k] > 0.0) {
                h -= vals[k] * std::log2(vals[k]);
            }
        }
    }
    return h;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace detail

}  // namespace qread
