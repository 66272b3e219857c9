#include "forge/rng.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "forge/linalg.hpp"

namespace forge {

double Rng::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(engine_);
}

double Rng::gaussian() {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
}

Complex Rng::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im) / std::sqrt(2.0);
}

Matrix Rng::matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
}

Matrix Rng::unitary(int d) {
    Eigen::HouseholderQR<Matrix> qr(matrix(d, d));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the diagonal phases so the factorization (and thus Q) is unique.
    for (int i = 0; i < d; ++i) {
        Complex rii = r(i, i);
        Complex phase = std::abs(rii) > 0 ? rii / std::abs(rii) : Complex(1, 0);
        q.col(i) *= phase;
    }
    return q;
}

Matrix Rng::contraction(int d, double norm) {
    Matrix m = matrix(d, d);
    const double current = operator_norm(m);
    if (current == 0.0) return m;
    return m * (norm / current);
}

Matrix Rng::psd(int d) {
    Matrix b = matrix(d, d);
    Matrix g = b.adjoint() * b;
    return g / g.trace().real();
}

std::vector<Matrix> Rng::commuting_tuple(int n, int d, bool normal) {
    return commuting_tuple_with_spectrum(n, d, normal, nullptr);
}

std::vector<Matrix> Rng::commuting_tuple_with_spectrum(int n, int d, bool normal,
                                                       std::vector<Vector>* joint_points) {
    // Common eigenbasis with independent diagonals per member. Eigenvalues are
    // kept well separated so downstream rank decisions stay clean.
    std::vector<Vector> diags(n, Vector(d));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k)
            diags[i](k) = Complex(uniform(-2.0, 2.0), uniform(-2.0, 2.0));

    Matrix s = unitary(d);
    Matrix s_inv;
    if (normal) {
        s_inv = s.adjoint();
    } else {
        // Mild non-normal similarity; conditioning stays modest.
        Matrix perturb = Matrix::Identity(d, d) + 0.3 * matrix(d, d);
        s = s * perturb;
        s_inv = s.inverse();
    }

    std::vector<Matrix> mats(n);
    for (int i = 0; i < n; ++i) mats[i] = s * diags[i].asDiagonal() * s_inv;

    if (joint_points) {
        joint_points->assign(d, Vector(n));
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < n; ++i) (*joint_points)[k](i) = diags[i](k);
    }
    return mats;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace forge
