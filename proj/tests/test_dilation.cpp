#include "test_helpers.hpp"

#include "forge/dilation.hpp"
#include "forge/kernels.hpp"

using namespace forge;

namespace {

const ToleranceConfig kTol;

MatrixTuple scalar_tuple(Complex value) {
    return MatrixTuple::make({Matrix::Constant(1, 1, value)}, 1e-10);
}

DiscretePOVM two_point_scalar_povm() {
    DiscretePOVM povm;
    povm.n = 1;
    povm.d = 1;
    povm.atoms.push_back({Vector::Constant(1, Complex(1.0)), Matrix::Constant(1, 1, 0.5)});
    povm.atoms.push_back({Vector::Constant(1, Complex(-1.0)), Matrix::Constant(1, 1, 0.5)});
    return povm;
}

}  // namespace

TEST_CASE("normal_m_dilation: symmetric two-point measure dilates zero") {
    MDilation dil = normal_m_dilation(scalar_tuple(0.0), two_point_scalar_povm(), 1, kTol);
    CHECK(dil.tuple_N.d == 2);
    // N is unitarily equivalent to diag(1, -1).
    std::vector<Vector> eigs = test::scalars_to_points(matrix_spectrum(dil.tuple_N[0]));
    std::vector<Vector> expected = test::scalars_to_points({Complex(1.0), Complex(-1.0)});
    CHECK(test::multiset_distance(eigs, expected) < 1e-10);
    CHECK(std::abs((dil.V.adjoint() * dil.tuple_N[0] * dil.V)(0, 0)) < 1e-12);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(dil.V(0, 0)) - inv_sqrt2) < 1e-12);
    CHECK(std::abs(std::abs(dil.V(1, 0)) - inv_sqrt2) < 1e-12);
}

TEST_CASE("normal_m_dilation: seeded contraction through the circle measure") {
    Rng rng(601);
    const Matrix t = rng.contraction(2, 0.85);
    MatrixTuple tuple = MatrixTuple::make({t}, 1e-10);
    DiscretePOVM povm = poisson_povm(t, 2048, kTol);
    ReduceReport rr;
    MDilation dil = normal_m_dilation(tuple, povm, 3, kTol, kDefaultCombinationSeed, &rr);
    CHECK(static_cast<int>(dil.support.size()) <= 57);

    // Direct two-sided oracle for every power.
    Matrix power = Matrix::Identity(2, 2);
    for (int k = 1; k <= 3; ++k) {
        power = power * t;
        const Matrix compressed = dil.V.adjoint() *
                                  tuple_power(dil.tuple_N, {k}) * dil.V;
        CHECK(operator_norm(power - compressed) <= 1e-6);
    }

    VerificationReport report = verify_m_dilation(tuple, dil, 3, kTol);
    CHECK(report.max_residual <= 1e-6);
    CHECK(report.support_contained);
    for (double nres : report.normality) CHECK(nres <= 1e-10);
    // Support sits on the sampled circle grid.
    for (const Vector& w : dil.support)
        CHECK(std::abs(std::abs(w(0)) - 1.0) < 1e-12);
}

TEST_CASE("normal_m_dilation: spectral measure of a normal reproduces it exactly") {
    MatrixTuple tuple = MatrixTuple::make({test::diag2(Complex(1.0), Complex(0.0, 1.0))}, 1e-10);
    DiscretePOVM povm = compress_spectral(tuple, Matrix::Identity(2, 2), kTol);
    MDilation dil = normal_m_dilation(tuple, povm, 5, kTol);
    VerificationReport report = verify_m_dilation(tuple, dil, 5, kTol);
    CHECK(report.max_residual <= 1e-10);
    REQUIRE(dil.support.size() == 2);
    std::vector<Vector> expected = test::scalars_to_points({Complex(1.0), Complex(0.0, 1.0)});
    CHECK(test::multiset_distance(dil.support, expected) < 1e-10);
}

TEST_CASE("normal_m_dilation: mismatched measure is refused") {
    // Moments of the uniform two-point measure match T = 0, not T = 0.5.
    CHECK_THROWS_AS(normal_m_dilation(scalar_tuple(0.5), two_point_scalar_povm(), 1, kTol),
                    MomentMismatch);
}

TEST_CASE("verify_m_dilation: isometry row and corrupted-projection control") {
    MDilation dil = normal_m_dilation(scalar_tuple(0.0), two_point_scalar_povm(), 1, kTol);
    VerificationReport good = verify_m_dilation(scalar_tuple(0.0), dil, 1, kTol);
    CHECK(good.isometry_residual <= 1e-10);
    CHECK(good.rows[0].residual <= 1e-10);  // alpha = 0 row

    MDilation corrupted = dil;
    corrupted.tuple_N.matrices[0].topLeftCorner(1, 1).setZero();  // one block wiped
    VerificationReport bad = verify_m_dilation(scalar_tuple(0.0), corrupted, 1, kTol);
    CHECK(bad.max_residual > 1e-6);
}

TEST_CASE("unitary_1_dilation: scalar cases") {
    Matrix u0 = unitary_1_dilation(Matrix::Zero(1, 1), kTol);
    Matrix flip(2, 2);
    flip << 0.0, 1.0, 1.0, 0.0;
    CHECK(operator_norm(u0 - flip) < 1e-14);

    Matrix u6 = unitary_1_dilation(Matrix::Constant(1, 1, 0.6), kTol);
    Matrix expected(2, 2);
    expected << 0.6, 0.8, 0.8, -0.6;
    CHECK(operator_norm(u6 - expected) < 1e-14);
}

TEST_CASE("unitary_1_dilation: seeded contractions give unitaries compressing to T") {
    Rng rng(602);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix t = rng.contraction(2, 0.95);
        const Matrix u = unitary_1_dilation(t, kTol);
        CHECK(operator_norm(u.adjoint() * u - Matrix::Identity(4, 4)) <= 1e-12);
        CHECK((u.topLeftCorner(2, 2) - t).norm() == 0.0);  // pasted block, exact
        CHECK(std::abs(operator_norm(u) - 1.0) <= 1e-10);
    }
    CHECK_THROWS_AS(unitary_1_dilation(2.0 * Matrix::Identity(2, 2), kTol), NotContraction);
}

TEST_CASE("finite_hull_membership: basics") {
    FiniteXSet origin;
    origin.n = 1;
    origin.points = {Vector::Zero(1)};
    CHECK(finite_hull_membership(origin, Vector::Zero(1), kTol).inside);

    FiniteXSet two;
    two.n = 2;
    Vector p1(2), p2(2), z(2);
    p1 << Complex(0.0), Complex(0.0);
    p2 << Complex(1.0), Complex(1.0);
    z << Complex(0.0), Complex(1.0);
    two.points = {p1, p2};
    HullResult h = finite_hull_membership(two, z, kTol);
    CHECK_FALSE(h.inside);
    CHECK(h.value_at_z > h.max_over_set);
    // The certificate really vanishes on the set and not at z.
    for (const Vector& w : two.points)
        CHECK(std::abs(evaluate_certificate(h.certificate, w)) < 1e-14);
    CHECK(std::abs(evaluate_certificate(h.certificate, z)) > 0.5);
}

TEST_CASE("finite_hull_membership: circle points versus an outside scalar") {
    FiniteXSet circle;
    circle.n = 1;
    for (int k = 0; k < 8; ++k) {
        const double theta = 2.0 * M_PI * k / 8.0;
        circle.points.push_back(
            Vector::Constant(1, Complex(std::cos(theta), std::sin(theta))));
    }
    HullResult h = finite_hull_membership(circle, Vector::Constant(1, Complex(2.0)), kTol);
    CHECK_FALSE(h.inside);
    CHECK(h.value_at_z > h.max_over_set);
}

TEST_CASE("sampled_spectral_check: disc is a spectral set for an inner scalar") {
    MatrixTuple t = scalar_tuple(0.5);
    std::vector<Vector> circle;
    for (int k = 0; k < 360; ++k) {
        const double theta = 2.0 * M_PI * k / 360.0;
        circle.push_back(Vector::Constant(1, Complex(std::cos(theta), std::sin(theta))));
    }
    SpectralCheckReport rep = sampled_spectral_check(t, circle, 4, 100, 603, kTol, {}, 1e-9);
    CHECK(rep.violations == 0);
    CHECK(rep.max_gap <= 1e-9);
}

TEST_CASE("sampled_spectral_check: spectrum outside a finite set is reported") {
    MatrixTuple t = scalar_tuple(2.0);
    FiniteXSet X;
    X.n = 1;
    X.points = {Vector::Zero(1), Vector::Constant(1, Complex(1.0))};
    std::vector<Vector> samples = X.points;
    SpectralCheckReport rep = sampled_spectral_check(t, samples, 2, 20, 604, kTol, X);
    CHECK(rep.spectrum_checked);
    CHECK(rep.spectrum_points_outside == 1);
    CHECK(rep.violations > 0);  // ||q(T)|| outruns the two-point sup
}

TEST_CASE("sampled_spectral_check: normal tuple supported on X never violates") {
    FiniteXSet X;
    X.n = 1;
    X.points = {Vector::Constant(1, Complex(0.2, 0.1)), Vector::Constant(1, Complex(-0.5, 0.4)),
                Vector::Constant(1, Complex(0.0, -0.9))};
    MatrixTuple t = MatrixTuple::make(
        {(Matrix(3, 3) << X.points[0](0), 0, 0, 0, X.points[1](0), 0, 0, 0, X.points[2](0))
             .finished()},
        1e-10);
    SpectralCheckReport rep =
        sampled_spectral_check(t, X.points, 3, 50, 605, kTol, X, 1e-9, /*block_size=*/2);
    CHECK(rep.violations == 0);
    CHECK(rep.spectrum_points_outside == 0);
}

TEST_CASE("consequence inequality holds for a produced dilation") {
    Rng rng(606);
    const Matrix t = rng.contraction(2, 0.7);
    MatrixTuple tuple = MatrixTuple::make({t}, 1e-10);
    DiscretePOVM povm = poisson_povm(t, 1024, kTol);
    MDilation dil = normal_m_dilation(tuple, povm, 2, kTol);
    std::vector<double> gaps = kernels::spectral_trial_gaps(
        tuple, dil.support, MomentBasis::graded(1, 2), 100, 607);
    for (double g : gaps) CHECK(g <= 1e-6);
}
