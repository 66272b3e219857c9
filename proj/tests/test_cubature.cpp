#include "test_helpers.hpp"

#include <numeric>

#include "forge/cubature.hpp"

using namespace forge;

namespace {

const ToleranceConfig kTol;

DiscretePOVM uniform_circle_povm(int count, int d, std::uint64_t seed, bool randomize_weights) {
    Rng rng(seed);
    DiscretePOVM povm;
    povm.n = 1;
    povm.d = d;
    std::vector<Matrix> raw;
    Matrix sum = Matrix::Zero(d, d);
    for (int j = 0; j < count; ++j) {
        Matrix w = randomize_weights ? Matrix(rng.psd(d)) : Matrix(Matrix::Identity(d, d) / count);
        sum += w;
        raw.push_back(std::move(w));
    }
    const Matrix fix = psd_inv_sqrt(sum, kTol);
    for (int j = 0; j < count; ++j) {
        const double theta = 2.0 * M_PI * j / count;
        PovmAtom atom;
        atom.point = Vector::Constant(1, Complex(std::cos(theta), std::sin(theta)));
        Matrix w = fix * raw[static_cast<size_t>(j)] * fix;
        atom.weight = 0.5 * (w + w.adjoint());
        povm.atoms.push_back(std::move(atom));
    }
    return povm;
}

// Independent moment accumulation from a reduction snapshot.
std::vector<Matrix> snapshot_moments(const ReduceSnapshot& snap, const MomentBasis& basis) {
    const int d = snap.pieces->d;
    std::vector<Matrix> mom(static_cast<size_t>(basis.monomial_count()), Matrix::Zero(d, d));
    for (int p : *snap.alive) {
        const Vector& u = snap.pieces->direction[static_cast<size_t>(p)];
        const Matrix block = snap.pieces->lambda[static_cast<size_t>(p)] * (u * u.adjoint());
        const Vector& z = (*snap.points)[static_cast<size_t>(snap.pieces->atom[static_cast<size_t>(p)])];
        for (int a = 0; a < basis.monomial_count(); ++a)
            mom[static_cast<size_t>(a)] += monomial_value(z, basis.exponents[static_cast<size_t>(a)]) * block;
    }
    return mom;
}

}  // namespace

TEST_CASE("real_embed: interleaved row-major layout") {
    Matrix m(1, 1);
    m(0, 0) = Complex(1.0, 2.0);
    RealVector v = real_embed(m);
    REQUIRE(v.size() == 2);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 2.0);
    CHECK(real_embed(Matrix::Zero(2, 2)).isZero(0.0));
}

TEST_CASE("real_embed is linear") {
    Rng rng(401);
    const Matrix a = rng.matrix(3, 3);
    const Matrix b = rng.matrix(3, 3);
    CHECK((real_embed(a + b) - (real_embed(a) + real_embed(b))).norm() == 0.0);
}

TEST_CASE("feature_vector: scalar example against a hand evaluation") {
    MomentBasis basis = MomentBasis::graded(1, 1);
    Matrix w = Matrix::Identity(1, 1);
    Vector z = Vector::Constant(1, Complex(1.0));
    RealVector v = feature_vector(w, z, basis);
    REQUIRE(v.size() == 6);
    RealVector expected(6);
    expected << 1, 0, 1, 0, 0, 0;  // (T(A), Re(z) T(A), Im(z) T(A))
    CHECK((v - expected).norm() == 0.0);

    // Independent scalar route: blocks are g_i(z) * (Re w, Im w).
    Rng rng(402);
    const Complex zz(rng.gaussian(), rng.gaussian());
    const Complex ww(rng.gaussian(), rng.gaussian());
    RealVector f = feature_vector(Matrix::Constant(1, 1, ww), Vector::Constant(1, zz), basis);
    CHECK(f(0) == ww.real());
    CHECK(f(1) == ww.imag());
    CHECK(f(2) == doctest::Approx(zz.real() * ww.real()));
    CHECK(f(3) == doctest::Approx(zz.real() * ww.imag()));
    CHECK(f(4) == doctest::Approx(zz.imag() * ww.real()));
    CHECK(f(5) == doctest::Approx(zz.imag() * ww.imag()));
}

TEST_CASE("feature_vector: zero weight and homogeneity") {
    MomentBasis basis = MomentBasis::graded(2, 2);
    Vector z(2);
    z << Complex(0.3, -0.2), Complex(1.1, 0.4);
    CHECK(feature_vector(Matrix::Zero(2, 2), z, basis).isZero(0.0));
    Rng rng(403);
    const Matrix w = rng.psd(2);
    RealVector base = feature_vector(w, z, basis);
    RealVector scaled = feature_vector(2.5 * w, z, basis);
    CHECK((scaled - 2.5 * base).norm() < 1e-12 * base.norm());
}

TEST_CASE("reduce: POVM already under the bound passes through unchanged") {
    DiscretePOVM povm;
    povm.n = 1;
    povm.d = 2;
    povm.atoms.push_back({Vector::Constant(1, Complex(0.5)), Matrix::Identity(2, 2)});
    ReduceReport report;
    DiscretePOVM out = reduce(povm, MomentBasis::graded(1, 2), kTol, &report);
    REQUIRE(out.atoms.size() == 1);
    CHECK(report.iterations == 0);
    CHECK((out.atoms[0].weight - povm.atoms[0].weight).norm() == 0.0);
    CHECK((out.atoms[0].point - povm.atoms[0].point).norm() == 0.0);
}

TEST_CASE("reduce: 100 uniform circle atoms collapse to at most 7") {
    DiscretePOVM povm = uniform_circle_povm(100, 1, 404, false);
    MomentBasis basis = MomentBasis::graded(1, 1);
    ReduceReport report;
    DiscretePOVM out = reduce(povm, basis, kTol, &report);
    CHECK(report.atom_bound == 7);
    CHECK(static_cast<int>(out.atoms.size()) <= 7);
    // Direct summation on both sides.
    Complex total = 0.0, first = 0.0;
    for (const PovmAtom& a : out.atoms) {
        total += a.weight(0, 0);
        first += a.point(0) * a.weight(0, 0);
    }
    CHECK(std::abs(total - Complex(1.0)) < 1e-10);
    CHECK(std::abs(first) < 1e-10);
    // Support containment.
    for (const PovmAtom& a : out.atoms) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const PovmAtom& in : povm.atoms) nearest = std::min(nearest, std::abs(a.point(0) - in.point(0)));
        CHECK(nearest == 0.0);
    }
}

TEST_CASE("reduce: poisson measure keeps every cubic moment") {
    Rng rng(405);
    const Matrix t = rng.contraction(2, 0.8);
    DiscretePOVM povm = poisson_povm(t, 1024, kTol);
    MomentBasis basis = MomentBasis::graded(1, 3);
    ReduceReport report;
    DiscretePOVM out = reduce(povm, basis, kTol, &report);
    CHECK(report.atom_bound == 57);  // 2 * 4 * 7 + 1
    CHECK(static_cast<int>(out.atoms.size()) <= 57);
    std::vector<Matrix> before = moments(povm, basis);
    std::vector<Matrix> after = moments(out, basis);
    for (int a = 0; a < basis.monomial_count(); ++a)
        CHECK(operator_norm(after[static_cast<size_t>(a)] - before[static_cast<size_t>(a)]) <=
              1e-8 * (1.0 + operator_norm(before[static_cast<size_t>(a)])));
}

TEST_CASE("reduce: per-pivot conservation, monotonicity and nonnegativity") {
    DiscretePOVM povm = uniform_circle_povm(60, 2, 406, true);
    MomentBasis basis = MomentBasis::graded(1, 1);

    std::vector<Matrix> reference;
    int last_alive = std::numeric_limits<int>::max();
    int iterations_seen = 0;
    double scale = 1.0;
    auto observer = [&](const ReduceSnapshot& snap) {
        std::vector<Matrix> mom = snapshot_moments(snap, basis);
        if (snap.iteration == 0) {
            reference = mom;
            for (const Matrix& m : reference) scale = std::max(scale, 1.0 + operator_norm(m));
        } else {
            iterations_seen = snap.iteration;
            const double budget =
                std::max(10.0 * 2.2e-16 * snap.iteration, 1e-14) * scale;
            for (size_t a = 0; a < mom.size(); ++a)
                CHECK(operator_norm(mom[a] - reference[a]) <= budget);
        }
        CHECK(static_cast<int>(snap.alive->size()) < last_alive);
        last_alive = static_cast<int>(snap.alive->size());
        for (int p : *snap.alive)
            CHECK(snap.pieces->lambda[static_cast<size_t>(p)] >= -kTol.eig_floor);
    };

    ReduceReport report;
    DiscretePOVM out = reduce(povm, basis, kTol, &report, {}, observer);
    CHECK(iterations_seen == report.iterations);
    CHECK(report.iterations <= report.input_pieces);
    CHECK(static_cast<int>(out.atoms.size()) <= report.atom_bound);
}

TEST_CASE("reduce_reference: literal variant takes one pivot per decomposition") {
    DiscretePOVM povm = uniform_circle_povm(40, 1, 407, true);
    MomentBasis basis = MomentBasis::graded(1, 1);
    ReduceReport report;
    DiscretePOVM out = reduce_reference(povm, basis, kTol, &report);
    CHECK(report.iterations == report.decompositions);
    CHECK(static_cast<int>(out.atoms.size()) <= report.atom_bound);
    CHECK(report.max_moment_drift <= kTol.moment_tol);
}

TEST_CASE("reduce and reduce_reference agree on the preserved moments") {
    DiscretePOVM povm = uniform_circle_povm(80, 2, 408, true);
    MomentBasis basis = MomentBasis::graded(1, 2);
    DiscretePOVM fast = reduce(povm, basis, kTol);
    DiscretePOVM slow = reduce_reference(povm, basis, kTol);
    std::vector<Matrix> mf = moments(fast, basis);
    std::vector<Matrix> ms = moments(slow, basis);
    std::vector<Matrix> m0 = moments(povm, basis);
    for (int a = 0; a < basis.monomial_count(); ++a) {
        const double s = 1.0 + operator_norm(m0[static_cast<size_t>(a)]);
        CHECK(operator_norm(mf[static_cast<size_t>(a)] - m0[static_cast<size_t>(a)]) <= 1e-8 * s);
        CHECK(operator_norm(ms[static_cast<size_t>(a)] - m0[static_cast<size_t>(a)]) <= 1e-8 * s);
    }
}

TEST_CASE("reduce: missing constant monomial is rejected") {
    MomentBasis broken;
    broken.n = 1;
    broken.m = 1;
    broken.exponents = {{1}};
    DiscretePOVM povm = uniform_circle_povm(10, 1, 409, false);
    CHECK_THROWS_AS(reduce(povm, broken, kTol), ConstantMissing);
}
