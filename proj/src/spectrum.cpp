#include "forge/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "forge/rng.hpp"

namespace forge {

namespace {

constexpr double kTriangularResidual = 1e-8;

// Frobenius mass of the strict lower triangle.
double lower_mass(const Matrix& m) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = j + 1; i < m.rows(); ++i) acc += std::norm(m(i, j));
    return std::sqrt(acc);
}

double relative_lower_mass(const Matrix& m) { return lower_mass(m) / (1.0 + operator_norm(m)); }

bool all_upper_triangular(const std::vector<Matrix>& mats) {
    for (const Matrix& m : mats)
        if (lower_mass(m) > kTriangularResidual * (1.0 + operator_norm(m))) return false;
    return true;
}

// One deflation step: a unit vector spanning (numerically) a common
// eigenvector of the tuple. Follows the nested-eigenspace narrowing: pick an
// eigenvalue of the first matrix, restrict the rest to its eigenspace, repeat.
Vector common_eigenvector(const std::vector<Matrix>& mats, const ToleranceConfig& tol) {
    const Eigen::Index d = mats[0].rows();
    Matrix basis = Matrix::Identity(d, d);
    for (const Matrix& a : mats) {
        if (basis.cols() == 1) break;
        Matrix restricted = basis.adjoint() * a * basis;
        Eigen::ComplexEigenSolver<Matrix> es(restricted);
        if (es.info() != Eigen::Success)
            throw TriangularizationFailed("deflation: eigensolver failed");
        // Deterministic eigenvalue choice: smallest by (Re, Im).
        Eigen::Index pick = 0;
        for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
            const Complex a_i = es.eigenvalues()(i), a_p = es.eigenvalues()(pick);
            if (a_i.real() < a_p.real() ||
                (a_i.real() == a_p.real() && a_i.imag() < a_p.imag()))
                pick = i;
        }
        const Complex lambda = es.eigenvalues()(pick);
        Matrix shifted = restricted - lambda * Matrix::Identity(restricted.rows(), restricted.cols());
        Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double cutoff = tol.null_sigma * (1.0 + sv(0));
        Eigen::Index nullity = 0;
        for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= cutoff; --i) ++nullity;
        if (nullity == 0) nullity = 1;  // defective case: keep the least singular direction
        basis = basis * svd.matrixV().rightCols(nullity);
        // Re-orthonormalize to stop drift across restrictions.
        Eigen::HouseholderQR<Matrix> qr(basis);
        basis = Matrix(qr.householderQ()).leftCols(nullity);
    }
    return basis.col(0);
}

// Unitary with first column v (Householder completion).
Matrix embed_first_column(const Vector& v) {
    const Eigen::Index d = v.size();
    Matrix u = Matrix::Identity(d, d);
    Vector w = v;
    const double alpha = w.norm();
    if (alpha == 0.0) return u;
    w /= alpha;
    // Reflect e_1 onto w.
    Vector diff = w - Matrix::Identity(d, 1).col(0);
    const double dn = diff.norm();
    if (dn < 1e-14) return u;
    diff /= dn;
    u -= 2.0 * diff * diff.adjoint();
    // Column phase so u.col(0) equals w exactly up to round-off.
    Complex phase = u.col(0).dot(w);  // conj(u.col0) . w
    if (std::abs(phase) > 0) u.col(0) *= phase / std::abs(phase);
    return u;
}

Matrix deflation_unitary(std::vector<Matrix> mats, const ToleranceConfig& tol) {
    const Eigen::Index d = mats[0].rows();
    Matrix u_total = Matrix::Identity(d, d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        const Eigen::Index r = d - k;
        Vector v = common_eigenvector(mats, tol);
        Matrix h = embed_first_column(v);
        std::vector<Matrix> next;
        next.reserve(mats.size());
        for (const Matrix& a : mats) {
            Matrix c = h.adjoint() * a * h;
            next.push_back(c.bottomRightCorner(r - 1, r - 1));
        }
        u_total.rightCols(r) = u_total.rightCols(r) * h;
        mats = std::move(next);
    }
    return u_total;
}

int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return static_cast<int>(acc);
}

// Enumerate k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace

MatrixTuple MatrixTuple::make(std::vector<Matrix> mats, double tol) {
    if (mats.empty()) throw DimensionError("MatrixTuple: empty tuple");
    const Eigen::Index d = mats[0].rows();
    for (const Matrix& m : mats) {
        if (m.rows() != m.cols()) throw DimensionError("MatrixTuple: matrices must be square");
        if (m.rows() != d) throw DimensionError("MatrixTuple: dimensions differ across members");
        if (!is_finite(m)) throw ValidationError("MatrixTuple: non-finite entry");
    }
    MatrixTuple t;
    t.n = static_cast<int>(mats.size());
    t.d = static_cast<int>(d);
    t.commutation_residual = forge::commutation_residual(mats);
    if (t.commutation_residual > tol)
        throw NotCommuting("MatrixTuple: commutation residual " +
                           std::to_string(t.commutation_residual) + " exceeds " +
                           std::to_string(tol));
    t.matrices = std::move(mats);
    return t;
}

TriangularForm simultaneous_triangularize(const MatrixTuple& tuple, const ToleranceConfig& tol,
                                          std::uint64_t seed) {
    TriangularForm form;
    const int d = tuple.d;

    // Already triangular: identity pass.
    if (all_upper_triangular(tuple.matrices)) {
        form.unitary = Matrix::Identity(d, d);
        form.triangular = tuple.matrices;
        for (const Matrix& m : form.triangular)
            form.max_lower_mass = std::max(form.max_lower_mass, relative_lower_mass(m));
        return form;
    }

    auto conjugate_all = [&](const Matrix& u) {
        std::vector<Matrix> out;
        out.reserve(tuple.matrices.size());
        for (const Matrix& m : tuple.matrices) out.push_back(u.adjoint() * m * u);
        return out;
    };

    auto finish = [&](const Matrix& u, bool deflated) -> bool {
        std::vector<Matrix> conj = conjugate_all(u);
        double worst = 0.0;
        for (const Matrix& m : conj) worst = std::max(worst, relative_lower_mass(m));
        if (worst > kTriangularResidual) return false;
        if (operator_norm(u.adjoint() * u - Matrix::Identity(d, d)) > tol.unitary_tol)
            return false;
        form.unitary = u;
        form.triangular = std::move(conj);
        form.max_lower_mass = worst;
        form.used_deflation = deflated;
        return true;
    };

    // Fast path: Schur form of a seeded generic combination.
    Rng rng(seed);
    Matrix combo = Matrix::Zero(d, d);
    for (const Matrix& m : tuple.matrices) combo += rng.complex_gaussian() * m;
    Eigen::ComplexSchur<Matrix> schur(combo);
    if (schur.info() == Eigen::Success && finish(schur.matrixU(), false)) return form;

    // Slow path: deflate one common eigenvector at a time.
    Matrix u = deflation_unitary(tuple.matrices, tol);
    if (finish(u, true)) return form;
    throw TriangularizationFailed("simultaneous_triangularize: residual above bound after deflation");
}

JointSpectrum joint_spectrum(const MatrixTuple& tuple, const ToleranceConfig& tol,
                             std::uint64_t seed) {
    TriangularForm form = simultaneous_triangularize(tuple, tol, seed);
    JointSpectrum js;
    js.points.reserve(tuple.d);
    for (int k = 0; k < tuple.d; ++k) {
        Vector p(tuple.n);
        for (int i = 0; i < tuple.n; ++i) p(i) = form.triangular[static_cast<size_t>(i)](k, k);
        js.points.push_back(std::move(p));
    }
    return js;
}

KoszulComplex KoszulComplex::build(const MatrixTuple& tuple) {
    const int n = tuple.n;
    const int d = tuple.d;
    KoszulComplex kc;
    kc.n = n;
    kc.d = d;
    kc.stage_dims.resize(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) kc.stage_dims[static_cast<size_t>(k)] = static_cast<Eigen::Index>(d) * binomial(n, k);

    // Map subset -> position within its stage for O(1) block lookups.
    std::vector<std::vector<std::vector<int>>> subsets(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) subsets[static_cast<size_t>(k)] = k_subsets(n, k);
    auto subset_index = [&](int k, const std::vector<int>& s) {
        const auto& list = subsets[static_cast<size_t>(k)];
        return static_cast<Eigen::Index>(
            std::lower_bound(list.begin(), list.end(), s) - list.begin());
    };

    kc.stage_maps.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        Matrix map = Matrix::Zero(kc.stage_dims[static_cast<size_t>(k) + 1],
                                  kc.stage_dims[static_cast<size_t>(k)]);
        const auto& from = subsets[static_cast<size_t>(k)];
        for (size_t col = 0; col < from.size(); ++col) {
            const std::vector<int>& s = from[col];
            for (int i = 0; i < n; ++i) {
                if (std::binary_search(s.begin(), s.end(), i)) continue;
                // e_i wedges in with sign (-1)^{#elements below i}.
                const int below = static_cast<int>(
                    std::lower_bound(s.begin(), s.end(), i) - s.begin());
                const double sign = (below % 2 == 0) ? 1.0 : -1.0;
                std::vector<int> target = s;
                target.insert(std::lower_bound(target.begin(), target.end(), i), i);
                const Eigen::Index row_block = subset_index(k + 1, target);
                map.block(row_block * d, static_cast<Eigen::Index>(col) * d, d, d) =
                    sign * tuple.matrices[static_cast<size_t>(i)];
            }
        }
        kc.stage_maps[static_cast<size_t>(k)] = std::move(map);
    }
    return kc;
}

double KoszulComplex::composition_residual() const {
    double worst = 0.0;
    double scale = 1.0;
    for (const Matrix& m : stage_maps) scale = std::max(scale, operator_norm(m));
    for (size_t k = 0; k + 1 < stage_maps.size(); ++k)
        worst = std::max(worst,
                         operator_norm(stage_maps[k + 1] * stage_maps[k]) / (scale * scale));
    return worst;
}

bool koszul_is_singular(const MatrixTuple& tuple, const Vector& lambda,
                        const ToleranceConfig& tol) {
    if (lambda.size() != tuple.n)
        throw DimensionError("koszul_is_singular: point dimension mismatch");
    std::vector<Matrix> shifted;
    shifted.reserve(tuple.matrices.size());
    for (int i = 0; i < tuple.n; ++i)
        shifted.push_back(tuple.matrices[static_cast<size_t>(i)] -
                          lambda(i) * Matrix::Identity(tuple.d, tuple.d));
    MatrixTuple st;
    st.n = tuple.n;
    st.d = tuple.d;
    st.matrices = std::move(shifted);
    st.commutation_residual = tuple.commutation_residual;

    KoszulComplex kc = KoszulComplex::build(st);

    // One global cutoff keeps rank and nullity decisions consistent across stages.
    double scale = 1.0;
    std::vector<Eigen::VectorXd> sigmas(kc.stage_maps.size());
    for (size_t k = 0; k < kc.stage_maps.size(); ++k) {
        Eigen::JacobiSVD<Matrix> svd(kc.stage_maps[k]);
        sigmas[k] = svd.singularValues();
        if (sigmas[k].size() > 0) scale = std::max(scale, sigmas[k](0));
    }
    const double cutoff = tol.null_sigma * scale;
    std::vector<Eigen::Index> rank(kc.stage_maps.size(), 0);
    for (size_t k = 0; k < kc.stage_maps.size(); ++k)
        for (Eigen::Index i = 0; i < sigmas[k].size(); ++i)
            if (sigmas[k](i) > cutoff) ++rank[k];

    // Exact at stage k iff nullity(D^k) == rank(D^{k-1}); D^n = 0, D^{-1} = 0.
    for (int k = 0; k <= tuple.n; ++k) {
        const Eigen::Index dim_k = kc.stage_dims[static_cast<size_t>(k)];
        const Eigen::Index rank_k = (k < tuple.n) ? rank[static_cast<size_t>(k)] : 0;
        const Eigen::Index rank_prev = (k > 0) ? rank[static_cast<size_t>(k) - 1] : 0;
        if (dim_k - rank_k != rank_prev) return true;
    }
    return false;
}

std::vector<Complex> matrix_spectrum(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    std::vector<Complex> out(static_cast<size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return out;
}

Matrix tuple_power(const MatrixTuple& tuple, const std::vector<int>& alpha) {
    if (static_cast<int>(alpha.size()) != tuple.n)
        throw DimensionError("tuple_power: multi-index length mismatch");
    Matrix acc = Matrix::Identity(tuple.d, tuple.d);
    for (int i = 0; i < tuple.n; ++i)
        for (int k = 0; k < alpha[static_cast<size_t>(i)]; ++k)
            acc = acc * tuple.matrices[static_cast<size_t>(i)];
    return acc;
}

}  // namespace forge
