#include "forge/naimark.hpp"

#include <Eigen/Dense>

namespace forge {

Matrix NaimarkDilation::projection(int j) const {
    Matrix e = Matrix::Zero(D(), D());
    e.block(static_cast<Eigen::Index>(j) * d, static_cast<Eigen::Index>(j) * d, d, d) =
        Matrix::Identity(d, d);
    return e;
}

Matrix NaimarkDilation::compress(int j) const {
    const Matrix block = V.middleRows(static_cast<Eigen::Index>(j) * d, d);
    return block.adjoint() * block;
}

Matrix NaimarkDilation::scalar_combination(const std::vector<Complex>& h) const {
    if (static_cast<int>(h.size()) != M)
        throw DimensionError("scalar_combination: need one coefficient per projection");
    Matrix out = Matrix::Zero(D(), D());
    for (int j = 0; j < M; ++j)
        out.block(static_cast<Eigen::Index>(j) * d, static_cast<Eigen::Index>(j) * d, d, d) =
            h[static_cast<size_t>(j)] * Matrix::Identity(d, d);
    return out;
}

NaimarkDilation naimark(const std::vector<Matrix>& weights, const ToleranceConfig& tol) {
    if (weights.empty()) throw NotNormalized("naimark: empty weight list");
    const Eigen::Index d = weights[0].rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const Matrix& w : weights) {
        if (w.rows() != d || w.cols() != d)
            throw DimensionError("naimark: weights must be square and equal-sized");
        if (min_eigenvalue(w) < -tol.eig_floor) throw NotPSD("naimark: weight not PSD");
        sum += w;
    }
    const double residual = operator_norm(sum - Matrix::Identity(d, d));
    if (residual > tol.moment_tol)
        throw NotNormalized("naimark: weights sum to the identity only within " +
                            std::to_string(residual));

    // Renormalize symmetrically so the stacked square roots form an isometry
    // to round-off even when the input is only moment_tol-normalized.
    const Matrix s_inv_sqrt = psd_inv_sqrt(sum, tol);

    NaimarkDilation nd;
    nd.M = static_cast<int>(weights.size());
    nd.d = static_cast<int>(d);
    nd.V = Matrix(static_cast<Eigen::Index>(nd.M) * d, d);
    for (int j = 0; j < nd.M; ++j) {
        Matrix w = s_inv_sqrt * weights[static_cast<size_t>(j)] * s_inv_sqrt;
        nd.V.middleRows(static_cast<Eigen::Index>(j) * d, d) =
            psd_sqrt(0.5 * (w + w.adjoint()), tol);
    }
    return nd;
}

}  // namespace forge
