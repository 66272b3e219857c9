#include "forge/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace forge {

void ToleranceConfig::require_positive() const {
    if (eig_floor <= 0 || null_sigma <= 0 || moment_tol <= 0 || cluster_tol <= 0 ||
        unitary_tol <= 0) {
        throw ValidationError("all tolerances must be strictly positive");
    }
}

double operator_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    // Jacobi is exact enough and fast at desk scale; singular values only.
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

bool is_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex& z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    return true;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol * (1.0 + m.norm());
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double commutation_residual(const std::vector<Matrix>& mats) {
    const size_t n = mats.size();
    if (n == 0) return 0.0;
    const Eigen::Index d = mats[0].rows();
    for (const Matrix& a : mats) {
        if (a.rows() != a.cols() || a.rows() != d)
            throw DimensionError("commutation_residual: matrices must be square and equal-sized");
    }
    std::vector<double> norms(n);
    for (size_t i = 0; i < n; ++i) norms[i] = operator_norm(mats[i]);
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double comm = operator_norm(mats[i] * mats[j] - mats[j] * mats[i]);
            worst = std::max(worst, comm / (1.0 + norms[i] * norms[j]));
        }
    return worst;
}

bool commutes(const std::vector<Matrix>& mats, double tol) {
    return commutation_residual(mats) <= tol;
}

namespace {

// Shared eigenvalue-clamping core for the PSD family.
Matrix psd_transform(const Matrix& m, const ToleranceConfig& tol, double exponent,
                     bool require_definite) {
    if (m.rows() != m.cols()) throw DimensionError("psd transform: matrix must be square");
    const double scale = 1.0 + m.norm();
    if ((m - m.adjoint()).norm() > 1e-8 * scale)
        throw NotPSD("psd transform: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
    if (es.info() != Eigen::Success) throw NumericalError("psd transform: eigensolver failed");
    RealVector vals = es.eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < -tol.eig_floor)
            throw NotPSD("psd transform: eigenvalue " + std::to_string(vals(i)) +
                         " below -eig_floor");
        if (require_definite && vals(i) <= tol.eig_floor)
            throw NotPSD("psd transform: matrix is not positive definite");
        if (vals(i) < 0.0) vals(i) = 0.0;  // round-off clamp
    }
    RealVector powered(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        powered(i) = exponent == 1.0 ? vals(i) : std::pow(vals(i), exponent);
    return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Matrix psd_sqrt(const Matrix& m, const ToleranceConfig& tol) {
    return psd_transform(m, tol, 0.5, false);
}

Matrix psd_inv_sqrt(const Matrix& m, const ToleranceConfig& tol) {
    return psd_transform(m, tol, -0.5, true);
}

Matrix psd_clamp(const Matrix& m, const ToleranceConfig& tol) {
    return psd_transform(m, tol, 1.0, false);
}

}  // namespace forge
