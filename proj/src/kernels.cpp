#include "forge/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "forge/cubature.hpp"
#include "forge/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace forge::kernels {

bool parallel_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

// ---- moments -------------------------------------------------------------

namespace {

// Single moment slot: fixed ascending atom order, so serial and parallel
// kernels produce bitwise-identical sums.
Matrix moment_slot(const DiscretePOVM& povm, const std::vector<int>& alpha) {
    Matrix acc = Matrix::Zero(povm.d, povm.d);
    for (const PovmAtom& atom : povm.atoms) acc += monomial_value(atom.point, alpha) * atom.weight;
    return acc;
}

}  // namespace

std::vector<Matrix> povm_moments_serial(const DiscretePOVM& povm, const MomentBasis& basis) {
    std::vector<Matrix> out(static_cast<size_t>(basis.monomial_count()));
    for (int a = 0; a < basis.monomial_count(); ++a)
        out[static_cast<size_t>(a)] = moment_slot(povm, basis.exponents[static_cast<size_t>(a)]);
    return out;
}

std::vector<Matrix> povm_moments_parallel(const DiscretePOVM& povm, const MomentBasis& basis) {
    std::vector<Matrix> out(static_cast<size_t>(basis.monomial_count()));
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < basis.monomial_count(); ++a)
        out[static_cast<size_t>(a)] = moment_slot(povm, basis.exponents[static_cast<size_t>(a)]);
    return out;
}

std::vector<Matrix> povm_moments(const DiscretePOVM& povm, const MomentBasis& basis) {
    return parallel_enabled() ? povm_moments_parallel(povm, basis)
                              : povm_moments_serial(povm, basis);
}

// ---- feature matrix --------------------------------------------------------

namespace {

void fill_feature_column(const RankOnePieces& pieces, const std::vector<Vector>& points,
                         int piece, const MomentBasis& basis, RealMatrix& f, Eigen::Index col) {
    const Vector& u = pieces.direction[static_cast<size_t>(piece)];
    const Matrix rank_one = u * u.adjoint();
    f.col(col) = feature_vector(rank_one, points[static_cast<size_t>(
                                    pieces.atom[static_cast<size_t>(piece)])], basis);
}

}  // namespace

RealMatrix feature_matrix_serial(const RankOnePieces& pieces, const std::vector<Vector>& points,
                                 const std::vector<int>& active, const MomentBasis& basis) {
    const Eigen::Index rows = 2 * static_cast<Eigen::Index>(pieces.d) * pieces.d * basis.feature_blocks();
    RealMatrix f(rows, static_cast<Eigen::Index>(active.size()));
    for (size_t c = 0; c < active.size(); ++c)
        fill_feature_column(pieces, points, active[c], basis, f, static_cast<Eigen::Index>(c));
    return f;
}

RealMatrix feature_matrix_parallel(const RankOnePieces& pieces, const std::vector<Vector>& points,
                                   const std::vector<int>& active, const MomentBasis& basis) {
    const Eigen::Index rows = 2 * static_cast<Eigen::Index>(pieces.d) * pieces.d * basis.feature_blocks();
    RealMatrix f(rows, static_cast<Eigen::Index>(active.size()));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(active.size()); ++c)
        fill_feature_column(pieces, points, active[static_cast<size_t>(c)], basis, f,
                            static_cast<Eigen::Index>(c));
    return f;
}

RealMatrix feature_matrix(const RankOnePieces& pieces, const std::vector<Vector>& points,
                          const std::vector<int>& active, const MomentBasis& basis) {
    return parallel_enabled() ? feature_matrix_parallel(pieces, points, active, basis)
                              : feature_matrix_serial(pieces, points, active, basis);
}

// ---- Poisson kernel weights ------------------------------------------------

namespace {

Matrix poisson_weight_at(const Matrix& t, const Matrix& cayley_grammian, int r, int resolution) {
    const Eigen::Index d = t.rows();
    const double theta = 2.0 * M_PI * static_cast<double>(r) / resolution;
    const Complex z(std::cos(theta), std::sin(theta));
    // (I - conj(z) T)^{-1}, then W = B* (I - T*T) B / R.
    Matrix b = (Matrix::Identity(d, d) - std::conj(z) * t).partialPivLu().solve(
        Matrix::Identity(d, d));
    Matrix w = b.adjoint() * cayley_grammian * b / static_cast<double>(resolution);
    return 0.5 * (w + w.adjoint());
}

}  // namespace

std::vector<Matrix> poisson_weights_serial(const Matrix& t, int resolution) {
    const Eigen::Index d = t.rows();
    const Matrix g = Matrix::Identity(d, d) - t.adjoint() * t;
    std::vector<Matrix> out(static_cast<size_t>(resolution));
    for (int r = 0; r < resolution; ++r)
        out[static_cast<size_t>(r)] = poisson_weight_at(t, g, r, resolution);
    return out;
}

std::vector<Matrix> poisson_weights_parallel(const Matrix& t, int resolution) {
    const Eigen::Index d = t.rows();
    const Matrix g = Matrix::Identity(d, d) - t.adjoint() * t;
    std::vector<Matrix> out(static_cast<size_t>(resolution));
#pragma omp parallel for schedule(static)
    for (int r = 0; r < resolution; ++r)
        out[static_cast<size_t>(r)] = poisson_weight_at(t, g, r, resolution);
    return out;
}

std::vector<Matrix> poisson_weights(const Matrix& t, int resolution) {
    return parallel_enabled() ? poisson_weights_parallel(t, resolution)
                              : poisson_weights_serial(t, resolution);
}

// ---- residual norms ----------------------------------------------------------

std::vector<double> residual_norms_serial(const std::vector<Matrix>& lhs,
                                          const std::vector<Matrix>& rhs) {
    std::vector<double> out(lhs.size());
    for (size_t i = 0; i < lhs.size(); ++i) out[i] = operator_norm(lhs[i] - rhs[i]);
    return out;
}

std::vector<double> residual_norms_parallel(const std::vector<Matrix>& lhs,
                                            const std::vector<Matrix>& rhs) {
    std::vector<double> out(lhs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(lhs.size()); ++i)
        out[static_cast<size_t>(i)] =
            operator_norm(lhs[static_cast<size_t>(i)] - rhs[static_cast<size_t>(i)]);
    return out;
}

std::vector<double> residual_norms(const std::vector<Matrix>& lhs,
                                   const std::vector<Matrix>& rhs) {
    if (lhs.size() != rhs.size()) throw DimensionError("residual_norms: list sizes differ");
    return parallel_enabled() ? residual_norms_parallel(lhs, rhs)
                              : residual_norms_serial(lhs, rhs);
}

// ---- sampled spectral trials ---------------------------------------------------

namespace {

double trial_gap(const MatrixTuple& tuple, const std::vector<Vector>& sample_points,
                 const MomentBasis& basis, std::uint64_t trial_seed) {
    Rng rng(trial_seed);
    std::vector<Complex> coeffs(static_cast<size_t>(basis.monomial_count()));
    for (Complex& c : coeffs) c = rng.complex_gaussian();

    Matrix q_of_t = Matrix::Zero(tuple.d, tuple.d);
    for (int a = 0; a < basis.monomial_count(); ++a)
        q_of_t += coeffs[static_cast<size_t>(a)] *
                  tuple_power(tuple, basis.exponents[static_cast<size_t>(a)]);

    double sup = 0.0;
    for (const Vector& x : sample_points) {
        Complex val = 0.0;
        for (int a = 0; a < basis.monomial_count(); ++a)
            val += coeffs[static_cast<size_t>(a)] * basis.eval_monomial(a, x);
        sup = std::max(sup, std::abs(val));
    }
    return operator_norm(q_of_t) - sup;
}

}  // namespace

std::vector<double> spectral_trial_gaps_serial(const MatrixTuple& tuple,
                                               const std::vector<Vector>& sample_points,
                                               const MomentBasis& basis, int trials,
                                               std::uint64_t seed) {
    std::vector<double> out(static_cast<size_t>(trials));
    for (int i = 0; i < trials; ++i)
        out[static_cast<size_t>(i)] = trial_gap(tuple, sample_points, basis,
                                                derive_seed(seed, static_cast<std::uint64_t>(i)));
    return out;
}

std::vector<double> spectral_trial_gaps_parallel(const MatrixTuple& tuple,
                                                 const std::vector<Vector>& sample_points,
                                                 const MomentBasis& basis, int trials,
                                                 std::uint64_t seed) {
    std::vector<double> out(static_cast<size_t>(trials));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < trials; ++i)
        out[static_cast<size_t>(i)] = trial_gap(tuple, sample_points, basis,
                                                derive_seed(seed, static_cast<std::uint64_t>(i)));
    return out;
}

std::vector<double> spectral_trial_gaps(const MatrixTuple& tuple,
                                        const std::vector<Vector>& sample_points,
                                        const MomentBasis& basis, int trials, std::uint64_t seed) {
    return parallel_enabled()
               ? spectral_trial_gaps_parallel(tuple, sample_points, basis, trials, seed)
               : spectral_trial_gaps_serial(tuple, sample_points, basis, trials, seed);
}

}  // namespace forge::kernels
