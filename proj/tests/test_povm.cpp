#include "test_helpers.hpp"

#include <numeric>

#include "forge/povm.hpp"

using namespace forge;

namespace {

const ToleranceConfig kTol;

DiscretePOVM scalar_povm(const std::vector<Complex>& points, const std::vector<double>& weights) {
    DiscretePOVM povm;
    povm.n = 1;
    povm.d = 1;
    for (size_t i = 0; i < points.size(); ++i) {
        PovmAtom atom;
        atom.point = Vector::Constant(1, points[i]);
        atom.weight = Matrix::Constant(1, 1, weights[i]);
        povm.atoms.push_back(std::move(atom));
    }
    return povm;
}

}  // namespace

TEST_CASE("MomentBasis: graded enumeration counts and order") {
    MomentBasis basis = MomentBasis::graded(2, 2);
    CHECK(basis.monomial_count() == 6);  // C(4,2)
    CHECK(basis.exponents[0] == std::vector<int>{0, 0});
    CHECK(basis.real_function_count() == 10);
    CHECK(basis.feature_blocks() == 11);
    // Degrees never decrease along the enumeration.
    int prev = 0;
    for (const auto& alpha : basis.exponents) {
        const int deg = std::accumulate(alpha.begin(), alpha.end(), 0);
        CHECK(deg >= prev);
        prev = deg;
    }
}

TEST_CASE("MomentBasis: real split evaluates Re/Im of monomials") {
    MomentBasis basis = MomentBasis::graded(1, 1);  // 1, z
    Vector z = Vector::Constant(1, Complex(0.3, 0.4));
    CHECK(basis.eval_real(1, z) == doctest::Approx(0.3));
    CHECK(basis.eval_real(2, z) == doctest::Approx(0.4));
}

TEST_CASE("validate: simple atoms pass") {
    DiscretePOVM one;
    one.n = 1;
    one.d = 3;
    one.atoms.push_back({Vector::Zero(1), Matrix::Identity(3, 3)});
    CHECK(validate(one, kTol).ok);

    DiscretePOVM two = scalar_povm({Complex(1.0), Complex(-1.0)}, {0.5, 0.5});
    PovmDiagnostics diag = validate(two, kTol);
    CHECK(diag.ok);
    CHECK(diag.normalization_residual < 1e-15);
}

TEST_CASE("validate: indefinite weight is rejected") {
    DiscretePOVM bad;
    bad.n = 1;
    bad.d = 2;
    bad.atoms.push_back({Vector::Zero(1), test::diag2(1.0, -1e-3)});
    bad.atoms.push_back({Vector::Constant(1, Complex(1.0)), test::diag2(0.0, 1.0 + 1e-3)});
    CHECK_THROWS_AS(validate(bad, kTol), NotPSD);
}

TEST_CASE("validate: duplicate points merge by weight addition") {
    DiscretePOVM dup = scalar_povm({Complex(1.0), Complex(1.0)}, {0.5, 0.5});
    PovmDiagnostics diag = validate(dup, kTol);
    CHECK(diag.ok);
    CHECK(diag.merges_performed == 1);
    REQUIRE(dup.atoms.size() == 1);
    CHECK(dup.atoms[0].weight(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("moments: scalar point power") {
    DiscretePOVM povm = scalar_povm({Complex(2.0)}, {1.0});
    MomentBasis basis = MomentBasis::graded(1, 3);
    std::vector<Matrix> mom = moments(povm, basis);
    CHECK(mom[3](0, 0).real() == doctest::Approx(8.0));  // z^3 at z = 2
}

TEST_CASE("moments: symmetric two-point measure") {
    DiscretePOVM povm;
    povm.n = 1;
    povm.d = 2;
    povm.atoms.push_back({Vector::Constant(1, Complex(1.0)), 0.5 * Matrix::Identity(2, 2)});
    povm.atoms.push_back({Vector::Constant(1, Complex(-1.0)), 0.5 * Matrix::Identity(2, 2)});
    MomentBasis basis = MomentBasis::graded(1, 2);
    std::vector<Matrix> mom = moments(povm, basis);
    CHECK(operator_norm(mom[1]) < 1e-15);
    CHECK(operator_norm(mom[2] - Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("moments: constant slot reproduces the weight sum") {
    Rng rng(301);
    DiscretePOVM povm;
    povm.n = 2;
    povm.d = 2;
    Matrix sum = Matrix::Zero(2, 2);
    std::vector<Matrix> raw;
    for (int j = 0; j < 7; ++j) {
        raw.push_back(rng.psd(2));
        sum += raw.back();
    }
    const Matrix fix = psd_inv_sqrt(sum, kTol);
    for (int j = 0; j < 7; ++j) {
        PovmAtom atom;
        atom.point = Vector(2);
        atom.point << rng.complex_gaussian(), rng.complex_gaussian();
        Matrix w = fix * raw[static_cast<size_t>(j)] * fix;
        atom.weight = 0.5 * (w + w.adjoint());
        povm.atoms.push_back(std::move(atom));
    }
    std::vector<Matrix> mom = moments(povm, MomentBasis::graded(2, 1));
    CHECK(operator_norm(mom[0] - povm.weight_sum()) < 1e-14);
    CHECK(operator_norm(mom[0] - Matrix::Identity(2, 2)) <= kTol.moment_tol);
}

TEST_CASE("moments: seeded circle measure matches reverse-order summation") {
    Rng rng(302);
    std::vector<Complex> pts;
    std::vector<double> ws(50, 0.02);
    for (int j = 0; j < 50; ++j) {
        const double theta = rng.uniform(0, 2 * M_PI);
        pts.push_back(Complex(std::cos(theta), std::sin(theta)));
    }
    DiscretePOVM povm = scalar_povm(pts, ws);
    MomentBasis basis = MomentBasis::graded(1, 4);
    std::vector<Matrix> mom = moments(povm, basis);
    for (int a = 0; a < basis.monomial_count(); ++a) {
        Complex oracle = 0.0;
        for (int j = 49; j >= 0; --j)
            oracle += 0.02 * monomial_value(povm.atoms[static_cast<size_t>(j)].point,
                                            basis.exponents[static_cast<size_t>(a)]);
        CHECK(std::abs(mom[static_cast<size_t>(a)](0, 0) - oracle) < 1e-14);
    }
}

TEST_CASE("compress_spectral: diagonal with identity embedding") {
    MatrixTuple n_tuple = MatrixTuple::make({test::diag2(1.0, -1.0)}, 1e-10);
    DiscretePOVM povm = compress_spectral(n_tuple, Matrix::Identity(2, 2), kTol);
    REQUIRE(povm.atoms.size() == 2);
    // Sorted output: -1 before 1 lexicographically.
    CHECK(std::abs(povm.atoms[0].point(0) - Complex(-1.0)) < 1e-12);
    CHECK(operator_norm(povm.atoms[0].weight - test::diag2(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(povm.atoms[1].point(0) - Complex(1.0)) < 1e-12);
    CHECK(operator_norm(povm.atoms[1].weight - test::diag2(1.0, 0.0)) < 1e-12);
}

TEST_CASE("compress_spectral: column embedding compresses projections") {
    MatrixTuple n_tuple = MatrixTuple::make({test::diag2(1.0, -1.0)}, 1e-10);
    Matrix v(2, 1);
    v << Complex(1.0 / std::sqrt(2.0)), Complex(1.0 / std::sqrt(2.0));
    DiscretePOVM povm = compress_spectral(n_tuple, v, kTol);
    REQUIRE(povm.atoms.size() == 2);
    for (const PovmAtom& a : povm.atoms) CHECK(a.weight(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("compress_spectral: moments equal compressed functional calculus") {
    Rng rng(303);
    MatrixTuple n_tuple = MatrixTuple::make(rng.commuting_tuple(2, 4, true), 1e-8);
    Matrix v = Matrix::Zero(4, 2);
    v(0, 0) = 1.0;
    v(1, 1) = 1.0;
    DiscretePOVM povm = compress_spectral(n_tuple, v, kTol);
    MomentBasis basis = MomentBasis::graded(2, 4);
    std::vector<Matrix> mom = moments(povm, basis);
    for (int a = 0; a < basis.monomial_count(); ++a) {
        const Matrix oracle =
            v.adjoint() * tuple_power(n_tuple, basis.exponents[static_cast<size_t>(a)]) * v;
        CHECK(operator_norm(mom[static_cast<size_t>(a)] - oracle) <= 1e-9);
    }
}

TEST_CASE("compress_spectral rejects non-normal and non-isometric input") {
    Matrix j = Matrix::Zero(2, 2);
    j(0, 1) = 1.0;
    MatrixTuple bad;
    bad.n = 1;
    bad.d = 2;
    bad.matrices = {j};
    CHECK_THROWS_AS(compress_spectral(bad, Matrix::Identity(2, 2), kTol), NotNormal);
    MatrixTuple good = MatrixTuple::make({test::diag2(1.0, -1.0)}, 1e-10);
    CHECK_THROWS_AS(compress_spectral(good, 2.0 * Matrix::Identity(2, 2), kTol), NotIsometry);
}

TEST_CASE("poisson_povm: zero contraction gives the uniform measure") {
    DiscretePOVM povm = poisson_povm(Matrix::Zero(1, 1), 4, kTol);
    REQUIRE(povm.atoms.size() == 4);
    for (int r = 0; r < 4; ++r) {
        const double theta = 2.0 * M_PI * r / 4.0;
        CHECK(std::abs(povm.atoms[static_cast<size_t>(r)].point(0) -
                       Complex(std::cos(theta), std::sin(theta))) < 1e-15);
        CHECK(povm.atoms[static_cast<size_t>(r)].weight(0, 0).real() ==
              doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("poisson_povm: scalar 0.5 matches its first moment and a finer grid") {
    const Matrix t = Matrix::Constant(1, 1, 0.5);
    DiscretePOVM povm = poisson_povm(t, 4096, kTol);
    MomentBasis basis = MomentBasis::graded(1, 1);
    std::vector<Matrix> mom = moments(povm, basis);
    CHECK(std::abs(mom[1](0, 0) - Complex(0.5)) < 1e-6);
    // Denser grid as the quadrature oracle.
    DiscretePOVM fine = poisson_povm(t, 1 << 16, kTol);
    std::vector<Matrix> fine_mom = moments(fine, basis);
    CHECK(std::abs(fine_mom[1](0, 0) - mom[1](0, 0)) < 1e-6);
}

TEST_CASE("poisson_povm: nilpotent contraction reproduces matrix powers") {
    Matrix t = Matrix::Zero(2, 2);
    t(0, 1) = 0.8;
    DiscretePOVM povm = poisson_povm(t, 4096, kTol);
    MomentBasis basis = MomentBasis::graded(1, 3);
    std::vector<Matrix> mom = moments(povm, basis);
    Matrix power = Matrix::Identity(2, 2);
    for (int k = 1; k <= 3; ++k) {
        power = power * t;
        CHECK(operator_norm(mom[static_cast<size_t>(k)] - power) < 1e-6);
    }
}

TEST_CASE("poisson_povm: moment error shrinks as the grid doubles") {
    Rng rng(304);
    const Matrix t = rng.contraction(2, 0.99);
    MomentBasis basis = MomentBasis::graded(1, 2);
    const Matrix t2 = t * t;
    std::vector<double> errs;
    for (int r : {512, 1024, 2048}) {
        DiscretePOVM povm = poisson_povm(t, r, kTol);
        std::vector<Matrix> mom = moments(povm, basis);
        errs.push_back(std::max(operator_norm(mom[1] - t), operator_norm(mom[2] - t2)));
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
}

TEST_CASE("poisson_povm rejects non-strict contractions") {
    CHECK_THROWS_AS(poisson_povm(Matrix::Identity(2, 2), 64, kTol), NotStrictContraction);
    CHECK_THROWS_AS(poisson_povm(Matrix::Zero(2, 2), 4, kTol), ValidationError);
}
