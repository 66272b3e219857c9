#include "test_helpers.hpp"

#include <Eigen/Dense>

using namespace forge;

TEST_CASE("commutes: diagonal matrices commute") {
    CHECK(commutes({test::diag2(1.0, 2.0), test::diag2(3.0, 4.0)}, 1e-12));
}

TEST_CASE("commutes: rank-one nilpotents do not") {
    Matrix up = Matrix::Zero(2, 2), down = Matrix::Zero(2, 2);
    up(0, 1) = 1.0;
    down(1, 0) = 1.0;
    CHECK_FALSE(commutes({up, down}, 1e-12));
}

TEST_CASE("commutes: polynomial in A commutes with A") {
    Rng rng(101);
    const Matrix a = rng.matrix(5, 5);
    // p(A) = A^3 - 2A + 3I
    const Matrix p = a * a * a - 2.0 * a + 3.0 * Matrix::Identity(5, 5);
    CHECK(commutes({a, p}, 1e-12));
}

TEST_CASE("commutes: dimension mismatch throws") {
    CHECK_THROWS_AS(commutes({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}, 1e-12),
                    DimensionError);
}

TEST_CASE("commutes is symmetric and unitary-conjugation invariant") {
    Rng rng(102);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = rng.matrix(4, 4);
        const Matrix b = rng.matrix(4, 4);
        const double r_ab = commutation_residual({a, b});
        const double r_ba = commutation_residual({b, a});
        CHECK(r_ab == doctest::Approx(r_ba).epsilon(1e-12));
        const Matrix q = rng.unitary(4);
        const double r_conj = commutation_residual({q.adjoint() * a * q, q.adjoint() * b * q});
        CHECK(r_conj == doctest::Approx(r_ab).epsilon(1e-8));
    }
}

TEST_CASE("psd_sqrt: identity and diagonal") {
    ToleranceConfig tol;
    CHECK(operator_norm(psd_sqrt(Matrix::Identity(3, 3), tol) - Matrix::Identity(3, 3)) < 1e-14);
    CHECK(operator_norm(psd_sqrt(test::diag2(4.0, 9.0), tol) - test::diag2(2.0, 3.0)) < 1e-14);
}

TEST_CASE("psd_sqrt: seeded Gram matrices square back") {
    ToleranceConfig tol;
    Rng rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix b = rng.matrix(4, 4);
        const Matrix g = b.adjoint() * b;
        const Matrix s = psd_sqrt(g, tol);
        CHECK(operator_norm(s - s.adjoint()) < 1e-12 * (1.0 + operator_norm(g)));
        CHECK(operator_norm(s * s - g) <= 1e-9 * (1.0 + operator_norm(g)));
        // The root commutes with its input.
        CHECK(operator_norm(s * g - g * s) <= 1e-9 * (1.0 + operator_norm(g)));
    }
}

TEST_CASE("psd_sqrt: clamps dust, rejects indefiniteness") {
    ToleranceConfig tol;
    const Matrix dust = test::diag2(1.0, -5e-11);
    const Matrix s = psd_sqrt(dust, tol);
    CHECK(s(1, 1).real() == 0.0);
    CHECK_THROWS_AS(psd_sqrt(test::diag2(1.0, -1e-3), tol), NotPSD);
}

TEST_CASE("operator_norm: basics") {
    CHECK(operator_norm(Matrix::Zero(3, 3)) == 0.0);
    Matrix shift = Matrix::Zero(2, 2);
    shift(0, 1) = 1.0;
    CHECK(operator_norm(shift) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("operator_norm matches the eigenvalue route") {
    Rng rng(104);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix m = rng.matrix(5, 5);
        Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
        const double oracle = std::sqrt(es.eigenvalues().maxCoeff());
        CHECK(operator_norm(m) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("operator_norm is submultiplicative") {
    Rng rng(105);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = rng.matrix(3, 3);
        const Matrix b = rng.matrix(3, 3);
        CHECK(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) + 1e-10);
    }
}

TEST_CASE("tolerances must be positive") {
    ToleranceConfig tol;
    tol.moment_tol = 0.0;
    CHECK_THROWS_AS(tol.require_positive(), ValidationError);
}
