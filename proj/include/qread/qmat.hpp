#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace qread {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Default eigenvalue clipping threshold; repeated tensor/mixing on dim-256
// operators accumulates error near 1e-12 per op.
inline constexpr double kPsdClip = 1e-10;
inline constexpr double kHermTol = 1e-12;

/// Dense complex matrix validated to be Hermitian at construction.
class HermitianOperator {
  public:
    explicit HermitianOperator(Matrix m);

    /// Wraps a matrix that is Hermitian by construction; skips validation
    /// but still symmetrizes to keep the invariant exact.
    static HermitianOperator trusted(Matrix m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    double trace() const { return mat_.trace().real(); }

  private:
    struct Trusted {};
    HermitianOperator(Matrix m, Trusted);
    Matrix mat_;
};

/// A Hermitian operator that is PSD (eigenvalues >= -1e-10) with unit trace.
class DensityOperator {
  public:
    explicit DensityOperator(HermitianOperator op);
    explicit DensityOperator(Matrix m) : DensityOperator(HermitianOperator(std::move(m))) {}

    /// For operators produced by trace-preserving internal arithmetic.
    static DensityOperator trusted(Matrix m);

    int dim() const { return op_.dim(); }
    const Matrix& matrix() const { return op_.matrix(); }
    const HermitianOperator& op() const { return op_; }

  private:
    struct Trusted {};
    DensityOperator(Matrix m, Trusted);
    HermitianOperator op_;
};

struct EigenSystem {
    RealVector values;  // descending
    Matrix vectors;     // orthonormal columns, paired with values
};

/// Eigendecomposition of a Hermitian operator, eigenvalues descending.
EigenSystem hermitian_eigs(const HermitianOperator& m);

/// PSD square root. Eigenvalues in [-psd_clip, 0) are clipped to zero;
/// anything below -psd_clip is a PSD violation.
HermitianOperator matrix_sqrt(const HermitianOperator& m, double psd_clip = kPsdClip);

/// Uhlmann fidelity F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1,
/// computed as the sum of singular values of sqrt(rho)*sqrt(sigma).
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Von Neumann entropy in bits, with 0 log 0 := 0.
double von_neumann_entropy(const DensityOperator& rho);

/// Kronecker product A (x) B.
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

/// Moore-Penrose inverse square root on the support:
/// sum over eigenvalues above support_cut of lambda^{-1/2} v v^dagger.
HermitianOperator pinv_sqrt(const HermitianOperator& m, double support_cut);

namespace detail {

// Matrix-level kernels shared by the modules above the type layer. These
// assume Hermitian input and do not re-validate.
Matrix sqrt_psd(const Matrix& m);
Matrix pinv_sqrt_m(const Matrix& m, double support_cut);
double fidelity_m(const Matrix& a, const Matrix& b);
double entropy_bits(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
RealVector eigenvalues_herm(const Matrix& m);

/// Tr(A B) for Hermitian A, B without forming the product.
double trace_product_herm(const Matrix& a, const Matrix& b);

/// Exactly diagonal (every off-diagonal entry is 0.0). Classical cells keep
/// all pipeline operators diagonal, which unlocks O(n) kernels.
bool is_diagonal(const Matrix& m);

/// A B A with a diagonal fast path.
Matrix sandwich_product(const Matrix& a, const Matrix& b);

/// Entropy (bits) of the pooled eigenvalue list of several unnormalized
/// PSD blocks; equals the entropy of the block-diagonal operator.
double pooled_entropy_bits(const std::vector<const Matrix*>& blocks);

double binary_entropy(double p);

}  // namespace detail

}  // namespace qread
