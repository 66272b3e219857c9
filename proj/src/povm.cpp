#include "forge/povm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "forge/kernels.hpp"
#include "forge/linalg.hpp"

namespace forge {

Matrix DiscretePOVM::weight_sum() const {
    Matrix acc = Matrix::Zero(d, d);
    for (const PovmAtom& a : atoms) acc += a.weight;
    return acc;
}

double DiscretePOVM::max_point_norm() const {
    double m = 0.0;
    for (const PovmAtom& a : atoms) m = std::max(m, a.point.lpNorm<Eigen::Infinity>());
    return m;
}

namespace {

// Single-linkage clusters under radius, deterministic: points are visited in
// lexicographic order of their real coordinate lists.
std::vector<std::vector<int>> single_linkage_clusters(const std::vector<Vector>& points,
                                                      double radius) {
    const int m = static_cast<int>(points.size());
    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    auto lex_less = [&](int a, int b) {
        const Vector& x = points[static_cast<size_t>(a)];
        const Vector& y = points[static_cast<size_t>(b)];
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x(i).real() != y(i).real()) return x(i).real() < y(i).real();
            if (x(i).imag() != y(i).imag()) return x(i).imag() < y(i).imag();
        }
        return a < b;
    };
    std::sort(order.begin(), order.end(), lex_less);

    std::vector<int> parent(static_cast<size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };

    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if ((points[static_cast<size_t>(order[static_cast<size_t>(i)])] -
                 points[static_cast<size_t>(order[static_cast<size_t>(j)])]).norm() <= radius)
                unite(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);

    std::vector<std::vector<int>> clusters;
    std::vector<int> root_slot(static_cast<size_t>(m), -1);
    for (int idx : order) {
        const int r = find(idx);
        if (root_slot[static_cast<size_t>(r)] < 0) {
            root_slot[static_cast<size_t>(r)] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<size_t>(root_slot[static_cast<size_t>(r)])].push_back(idx);
    }
    return clusters;
}

PovmDiagnostics check_invariants(const DiscretePOVM& povm, const ToleranceConfig& tol) {
    PovmDiagnostics diag;
    diag.normalization_residual = operator_norm(povm.weight_sum() - Matrix::Identity(povm.d, povm.d));
    diag.min_weight_eigenvalue = 0.0;
    for (const PovmAtom& a : povm.atoms) {
        if (a.weight.rows() != povm.d || a.weight.cols() != povm.d) {
            diag.failure = "weight dimension mismatch";
            return diag;
        }
        if (a.point.size() != povm.n) {
            diag.failure = "point dimension mismatch";
            return diag;
        }
        const double herm = (a.weight - a.weight.adjoint()).norm() / (1.0 + a.weight.norm());
        diag.max_hermiticity_residual = std::max(diag.max_hermiticity_residual, herm);
        diag.min_weight_eigenvalue = std::min(diag.min_weight_eigenvalue, min_eigenvalue(a.weight));
    }
    if (diag.max_hermiticity_residual > 1e-10) {
        diag.failure = "weight not Hermitian";
        return diag;
    }
    if (diag.min_weight_eigenvalue < -tol.eig_floor) {
        diag.failure = "weight not PSD";
        return diag;
    }
    if (diag.normalization_residual > tol.moment_tol) {
        diag.failure = "weights do not sum to the identity";
        return diag;
    }
    diag.ok = true;
    return diag;
}

}  // namespace

PovmDiagnostics inspect(const DiscretePOVM& povm, const ToleranceConfig& tol) {
    if (povm.atoms.empty()) {
        PovmDiagnostics diag;
        diag.failure = "empty POVM";
        return diag;
    }
    return check_invariants(povm, tol);
}

PovmDiagnostics validate(DiscretePOVM& povm, const ToleranceConfig& tol) {
    if (povm.atoms.empty()) throw NotNormalized("validate: empty POVM");

    // Merge near-duplicate support points by weight addition.
    std::vector<Vector> pts;
    pts.reserve(povm.atoms.size());
    for (const PovmAtom& a : povm.atoms) pts.push_back(a.point);
    const double radius = tol.cluster_tol * (1.0 + povm.max_point_norm());
    std::vector<std::vector<int>> clusters = single_linkage_clusters(pts, radius);

    int merges = 0;
    if (clusters.size() != povm.atoms.size()) {
        std::vector<PovmAtom> merged;
        merged.reserve(clusters.size());
        for (const std::vector<int>& c : clusters) {
            PovmAtom atom;
            atom.point = Vector::Zero(povm.n);
            atom.weight = Matrix::Zero(povm.d, povm.d);
            for (int idx : c) {
                atom.point += povm.atoms[static_cast<size_t>(idx)].point;
                atom.weight += povm.atoms[static_cast<size_t>(idx)].weight;
            }
            atom.point /= static_cast<double>(c.size());
            merges += static_cast<int>(c.size()) - 1;
            merged.push_back(std::move(atom));
        }
        povm.atoms = std::move(merged);
    }

    PovmDiagnostics diag = check_invariants(povm, tol);
    diag.merges_performed = merges;
    povm.normalization_residual = diag.normalization_residual;
    if (!diag.ok) {
        if (diag.failure == "weight not PSD" || diag.failure == "weight not Hermitian")
            throw NotPSD("validate: " + diag.failure);
        if (diag.failure == "weights do not sum to the identity")
            throw NotNormalized("validate: normalization residual " +
                                std::to_string(diag.normalization_residual));
        throw ValidationError("validate: " + diag.failure);
    }
    return diag;
}

MomentBasis MomentBasis::graded(int n, int m) {
    if (n < 1) throw DimensionError("MomentBasis: need at least one variable");
    if (m < 0) throw DimensionError("MomentBasis: degree must be non-negative");
    MomentBasis basis;
    basis.n = n;
    basis.m = m;
    // Ascending total degree, lexicographic within a degree.
    std::vector<int> alpha(static_cast<size_t>(n), 0);
    std::function<void(int, int, int)> rec = [&](int pos, int remaining, int target) {
        if (pos == n) {
            if (remaining == 0) basis.exponents.push_back(alpha);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            alpha[static_cast<size_t>(pos)] = e;
            rec(pos + 1, remaining - e, target);
        }
        alpha[static_cast<size_t>(pos)] = 0;
    };
    for (int deg = 0; deg <= m; ++deg) rec(0, deg, deg);
    return basis;
}

Complex monomial_value(const Vector& z, const std::vector<int>& alpha) {
    Complex acc(1.0, 0.0);
    for (Eigen::Index i = 0; i < z.size(); ++i)
        for (int k = 0; k < alpha[static_cast<size_t>(i)]; ++k) acc *= z(i);
    return acc;
}

Complex MomentBasis::eval_monomial(int idx, const Vector& z) const {
    return monomial_value(z, exponents[static_cast<size_t>(idx)]);
}

double MomentBasis::eval_real(int g_idx, const Vector& z) const {
    const int monomial = (g_idx + 1) / 2;  // g_1,g_2 -> monomial 1, ...
    const Complex v = eval_monomial(monomial, z);
    return (g_idx % 2 == 1) ? v.real() : v.imag();
}

std::vector<Matrix> moments(const DiscretePOVM& povm, const MomentBasis& basis) {
    if (basis.n != povm.n) throw DimensionError("moments: basis/povm variable count mismatch");
    return kernels::povm_moments(povm, basis);
}

DiscretePOVM compress_spectral(const MatrixTuple& normal_tuple, const Matrix& embed,
                               const ToleranceConfig& tol, std::uint64_t seed) {
    const int dim = normal_tuple.d;
    if (embed.rows() != dim) throw DimensionError("compress_spectral: embed rows mismatch");
    const int h = static_cast<int>(embed.cols());
    if (operator_norm(embed.adjoint() * embed - Matrix::Identity(h, h)) > tol.unitary_tol)
        throw NotIsometry("compress_spectral: embed is not an isometry");
    for (const Matrix& nmat : normal_tuple.matrices) {
        const double res = operator_norm(nmat * nmat.adjoint() - nmat.adjoint() * nmat);
        if (res > tol.unitary_tol * (1.0 + operator_norm(nmat) * operator_norm(nmat)))
            throw NotNormal("compress_spectral: tuple member is not normal");
    }

    // Commuting normals triangularize to (numerically) diagonal form.
    TriangularForm form = simultaneous_triangularize(normal_tuple, tol, seed);
    std::vector<Vector> diag_points(static_cast<size_t>(dim), Vector(normal_tuple.n));
    for (int k = 0; k < dim; ++k)
        for (int i = 0; i < normal_tuple.n; ++i)
            diag_points[static_cast<size_t>(k)](i) = form.triangular[static_cast<size_t>(i)](k, k);

    double max_abs = 0.0;
    for (const Vector& p : diag_points) max_abs = std::max(max_abs, p.lpNorm<Eigen::Infinity>());
    std::vector<std::vector<int>> clusters =
        single_linkage_clusters(diag_points, tol.cluster_tol * (1.0 + max_abs));

    // Weight per cluster: (U*V)^* P (U*V) restricted to the cluster rows.
    const Matrix g = form.unitary.adjoint() * embed;  // dim x h
    DiscretePOVM out;
    out.n = normal_tuple.n;
    out.d = h;
    out.atoms.reserve(clusters.size());
    for (const std::vector<int>& cluster : clusters) {
        Matrix rows(static_cast<Eigen::Index>(cluster.size()), h);
        Vector point = Vector::Zero(normal_tuple.n);
        for (size_t r = 0; r < cluster.size(); ++r) {
            rows.row(static_cast<Eigen::Index>(r)) = g.row(cluster[r]);
            point += diag_points[static_cast<size_t>(cluster[r])];
        }
        point /= static_cast<double>(cluster.size());
        PovmAtom atom;
        atom.point = std::move(point);
        atom.weight = rows.adjoint() * rows;  // structurally Hermitian PSD
        out.atoms.push_back(std::move(atom));
    }
    out.normalization_residual =
        operator_norm(out.weight_sum() - Matrix::Identity(h, h));
    return out;
}

DiscretePOVM poisson_povm(const Matrix& t, int resolution, const ToleranceConfig& tol) {
    if (t.rows() != t.cols()) throw DimensionError("poisson_povm: matrix must be square");
    if (resolution < 8) throw ValidationError("poisson_povm: resolution must be at least 8");
    const double norm_t = operator_norm(t);
    if (norm_t > 1.0 - 1e-6)
        throw NotStrictContraction("poisson_povm: ||T|| = " + std::to_string(norm_t) +
                                   " is not strictly inside the disc");

    std::vector<Matrix> raw = kernels::poisson_weights(t, resolution);
    Matrix s = Matrix::Zero(t.rows(), t.cols());
    for (const Matrix& w : raw) s += w;
    const Matrix s_inv_sqrt = psd_inv_sqrt(s, tol);

    DiscretePOVM povm;
    povm.n = 1;
    povm.d = static_cast<int>(t.rows());
    povm.atoms.reserve(raw.size());
    for (int r = 0; r < resolution; ++r) {
        const double theta = 2.0 * M_PI * static_cast<double>(r) / resolution;
        PovmAtom atom;
        atom.point = Vector::Constant(1, Complex(std::cos(theta), std::sin(theta)));
        Matrix w = s_inv_sqrt * raw[static_cast<size_t>(r)] * s_inv_sqrt;
        atom.weight = 0.5 * (w + w.adjoint());
        povm.atoms.push_back(std::move(atom));
    }
    povm.normalization_residual =
        operator_norm(povm.weight_sum() - Matrix::Identity(povm.d, povm.d));
    return povm;
}

}  // namespace forge
