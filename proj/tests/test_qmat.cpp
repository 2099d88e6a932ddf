#include <doctest.h>

#include "support.hpp"

using namespace qread;
using test::diag2;

TEST_CASE("hermitian_eigs on known spectra") {
    const auto id = hermitian_eigs(HermitianOperator(Matrix::Identity(2, 2)));
    CHECK(id.values[0] == doctest::Approx(1.0));
    CHECK(id.values[1] == doctest::Approx(1.0));

    const auto d = hermitian_eigs(HermitianOperator(diag2(0.25, 0.75)));
    CHECK(d.values[0] == doctest::Approx(0.75));  // descending
    CHECK(d.values[1] == doctest::Approx(0.25));

    Matrix pauli_x = Matrix::Zero(2, 2);
    pauli_x(0, 1) = 1.0;
    pauli_x(1, 0) = 1.0;
    const auto x = hermitian_eigs(HermitianOperator(pauli_x));
    CHECK(x.values[0] == doctest::Approx(1.0));
    CHECK(x.values[1] == doctest::Approx(-1.0));
}

TEST_CASE("hermitian_eigs reconstruction and orthonormality on random input") {
    SplitMix64 rng(31337);
    for (int t = 0; t < 20; ++t) {
        const int dim = 2 + static_cast<int>(rng.uniform() * 7);
        const DensityOperator rho = random_density(rng, dim, dim);
        const HermitianOperator m(Matrix(rho.matrix() * 3.0));
        const auto es = hermitian_eigs(m);
        const Matrix recon = es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
        CHECK((recon - m.matrix()).norm() <= 1e-10 * dim);
        CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(dim, dim)).norm() <= 1e-10);
        for (int k = 1; k < dim; ++k) {
            CHECK(es.values[k - 1] >= es.values[k]);
        }
    }
}

TEST_CASE("non-Hermitian input is rejected with the worst entry pair named") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = Complex(0.0, 1.0);
    m(1, 0) = Complex(0.0, 1.0);  // conjugate would be (0,-1)
    try {
        HermitianOperator h(m);
        FAIL("expected a rejection");
    } catch (const std::invalid_argument& ex) {
        const std::string msg = ex.what();
        CHECK(msg.find("(0,1)") != std::string::npos);
        CHECK(msg.find("(1,0)") != std::string::npos);
    }
}

TEST_CASE("matrix_sqrt basics") {
    CHECK((matrix_sqrt(HermitianOperator(Matrix::Identity(2, 2))).matrix() -
           Matrix::Identity(2, 2))
              .norm() <= 1e-12);
    const Matrix s = matrix_sqrt(HermitianOperator(diag2(4.0, 9.0))).matrix();
    CHECK(s(0, 0).real() == doctest::Approx(2.0));
    CHECK(s(1, 1).real() == doctest::Approx(3.0));

    // rank-1 projector is idempotent, so it is its own square root
    Matrix proj(2, 2);
    proj << 0.5, 0.5, 0.5, 0.5;
    CHECK((matrix_sqrt(HermitianOperator(proj)).matrix() - proj).norm() <= 1e-9);

    CHECK_THROWS_AS(matrix_sqrt(HermitianOperator(diag2(1.0, -0.5))), std::invalid_argument);
}

TEST_CASE("matrix_sqrt squares back on random PSD input") {
    SplitMix64 rng(99);
    for (int t = 0; t < 30; ++t) {
        const int dim = 2 + static_cast<int>(rng.uniform() * 5);
        const Matrix m = random_density(rng, dim, dim).matrix() * 2.5;
        const Matrix s = matrix_sqrt(HermitianOperator(m)).matrix();
        CHECK((s * s - m).norm() <= 1e-9);
        CHECK(detail::eigenvalues_herm(s).minCoeff() >= -1e-12);
    }
}

TEST_CASE("fidelity on known pairs") {
    const DensityOperator k0 = test::ket0();
    const DensityOperator k1 = test::ket1();
    CHECK(fidelity(k0, k0) == doctest::Approx(1.0));
    CHECK(fidelity(k0, k1) == doctest::Approx(0.0));
    const DensityOperator mixed(diag2(0.5, 0.5));
    CHECK(fidelity(k0, mixed) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(fidelity(k0, DensityOperator(Matrix(Matrix::Identity(4, 4) / 4.0))),
                    std::invalid_argument);
}

TEST_CASE("fidelity symmetry over random qubit and ququart pairs") {
    SplitMix64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const int dim = t % 2 == 0 ? 2 : 4;
        const DensityOperator a =
            random_density(rng, dim, 1 + static_cast<int>(rng.uniform() * dim));
        const DensityOperator b =
            random_density(rng, dim, 1 + static_cast<int>(rng.uniform() * dim));
        CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-10);
        CHECK(fidelity(a, b) <= 1.0 + 1e-10);
        CHECK(fidelity(a, b) >= 0.0);
    }
}

TEST_CASE("fidelity multiplicativity and block decomposition") {
    SplitMix64 rng(11);
    for (int t = 0; t < 25; ++t) {
        const DensityOperator r1 = random_density(rng, 2, 2);
        const DensityOperator r2 = random_density(rng, 2, 1 + (t % 2));
        const DensityOperator s1 = random_density(rng, 2, 2);
        const DensityOperator s2 = random_density(rng, 2, 2);
        const double direct = detail::fidelity_m(detail::kron(r1.matrix(), r2.matrix()),
                                                 detail::kron(s1.matrix(), s2.matrix()));
        CHECK(std::abs(direct - fidelity(r1, s1) * fidelity(r2, s2)) <= 1e-9);

        // F(sum_x p_x |x><x| (x) sigma_x, sum_x q_x |x><x| (x) tau_x)
        //   = sum_x sqrt(p_x q_x) F(sigma_x, tau_x)
        const double p = 0.2 + 0.6 * rng.uniform();
        const double q = 0.2 + 0.6 * rng.uniform();
        Matrix block_a = Matrix::Zero(4, 4);
        block_a.topLeftCorner(2, 2) = p * r1.matrix();
        block_a.bottomRightCorner(2, 2) = (1 - p) * r2.matrix();
        Matrix block_b = Matrix::Zero(4, 4);
        block_b.topLeftCorner(2, 2) = q * s1.matrix();
        block_b.bottomRightCorner(2, 2) = (1 - q) * s2.matrix();
        const double expected = std::sqrt(p * q) * fidelity(r1, s1) +
                                std::sqrt((1 - p) * (1 - q)) * fidelity(r2, s2);
        CHECK(std::abs(detail::fidelity_m(block_a, block_b) - expected) <= 1e-9);
    }
}

TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann_entropy(test::ket0()) == doctest::Approx(0.0));
    CHECK(von_neumann_entropy(DensityOperator(diag2(0.5, 0.5))) == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(DensityOperator(diag2(0.25, 0.75))) ==
          doctest::Approx(test::binary_h(0.25)));

    SplitMix64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const int dim = 2 + static_cast<int>(rng.uniform() * 7);
        const DensityOperator rho = random_density(rng, dim, dim);
        const double h = von_neumann_entropy(rho);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(dim) + 1e-10);
    }
}

TEST_CASE("entropy additivity under tensor") {
    SplitMix64 rng(13);
    for (int t = 0; t < 20; ++t) {
        const DensityOperator a = random_density(rng, 2, 2);
        const DensityOperator b = random_density(rng, 3, 3);
        const double joint = detail::entropy_bits(detail::kron(a.matrix(), b.matrix()));
        CHECK(std::abs(joint - von_neumann_entropy(a) - von_neumann_entropy(b)) <= 1e-9);
    }
}

TEST_CASE("tensor products") {
    const HermitianOperator i2{Matrix(Matrix::Identity(2, 2))};
    CHECK((tensor(i2, i2).matrix() - Matrix::Identity(4, 4)).norm() == 0.0);
    const Matrix t =
        tensor(HermitianOperator(diag2(1, 0)), HermitianOperator(diag2(0, 1))).matrix();
    CHECK(t(1, 1).real() == doctest::Approx(1.0));
    CHECK(t.trace().real() == doctest::Approx(1.0));

    SplitMix64 rng(17);
    for (int t2 = 0; t2 < 10; ++t2) {
        const Matrix a = random_density(rng, 2, 2).matrix() * (1.0 + rng.uniform());
        const Matrix b = random_density(rng, 3, 3).matrix() * (1.0 + rng.uniform());
        CHECK(detail::kron(a, b).trace().real() ==
              doctest::Approx(a.trace().real() * b.trace().real()));
    }
}

TEST_CASE("pinv_sqrt") {
    CHECK((pinv_sqrt(HermitianOperator(Matrix(Matrix::Identity(3, 3))), 1e-12).matrix() -
           Matrix::Identity(3, 3))
              .norm() <= 1e-12);
    const Matrix a = pinv_sqrt(HermitianOperator(diag2(4.0, 0.0)), 1e-12).matrix();
    CHECK(a(0, 0).real() == doctest::Approx(0.5));
    CHECK(a(1, 1).real() == doctest::Approx(0.0));
    const Matrix b = pinv_sqrt(HermitianOperator(diag2(9.0, 1e-20)), 1e-12).matrix();
    CHECK(b(0, 0).real() == doctest::Approx(1.0 / 3.0));
    CHECK(b(1, 1).real() == doctest::Approx(0.0));

    // result * M * result equals the support projector
    SplitMix64 rng(23);
    for (int t = 0; t < 10; ++t) {
        const Matrix m = random_density(rng, 4, 2).matrix();  // rank deficient
        const Matrix r = detail::pinv_sqrt_m(m, 1e-12);
        const Matrix proj = r * m * r;
        CHECK((proj * proj - proj).norm() <= 1e-9);
        CHECK(std::abs(proj.trace().real() - 2.0) <= 1e-8);
    }
}

TEST_CASE("density operator validation") {
    CHECK_THROWS_AS(DensityOperator(diag2(1.2, -0.2)), std::invalid_argument);
    CHECK_THROWS_AS(DensityOperator(diag2(0.7, 0.7)), std::invalid_argument);
}
