#include "forge/dilation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "forge/kernels.hpp"
#include "forge/rng.hpp"

namespace forge {

namespace {

// Powers T^alpha for every |alpha| <= m, memoized along the graded order.
std::vector<Matrix> all_powers(const MatrixTuple& tuple, const MomentBasis& basis) {
    std::vector<Matrix> powers(static_cast<size_t>(basis.monomial_count()));
    for (int a = 0; a < basis.monomial_count(); ++a) {
        const std::vector<int>& alpha = basis.exponents[static_cast<size_t>(a)];
        const int degree = std::accumulate(alpha.begin(), alpha.end(), 0);
        if (degree == 0) {
            powers[static_cast<size_t>(a)] = Matrix::Identity(tuple.d, tuple.d);
            continue;
        }
        // Find the predecessor with one exponent lowered.
        std::vector<int> prev = alpha;
        int var = 0;
        for (int i = 0; i < tuple.n; ++i)
            if (alpha[static_cast<size_t>(i)] > 0) {
                var = i;
                break;
            }
        --prev[static_cast<size_t>(var)];
        const auto it = std::find(basis.exponents.begin(), basis.exponents.end(), prev);
        powers[static_cast<size_t>(a)] =
            tuple.matrices[static_cast<size_t>(var)] *
            powers[static_cast<size_t>(it - basis.exponents.begin())];
    }
    return powers;
}

}  // namespace

MDilation normal_m_dilation(const MatrixTuple& T, const DiscretePOVM& povm, int m,
                            const ToleranceConfig& tol, std::uint64_t seed,
                            ReduceReport* reduce_report) {
    if (povm.n != T.n) throw DimensionError("normal_m_dilation: variable count mismatch");
    if (povm.d != T.d) throw DimensionError("normal_m_dilation: matrix size mismatch");
    if (m < 1) throw ValidationError("normal_m_dilation: degree must be positive");

    const MomentBasis basis = MomentBasis::graded(T.n, m);

    // Moment compatibility: the measure must already integrate monomials to
    // the corresponding powers of T.
    DiscretePOVM checked = povm;
    validate(checked, tol);
    {
        const std::vector<Matrix> mom = moments(checked, basis);
        const std::vector<Matrix> pow = all_powers(T, basis);
        double worst = 0.0;
        std::vector<int> worst_alpha = basis.exponents[0];
        for (int a = 0; a < basis.monomial_count(); ++a) {
            const double rel = operator_norm(mom[static_cast<size_t>(a)] - pow[static_cast<size_t>(a)]) /
                               (1.0 + operator_norm(pow[static_cast<size_t>(a)]));
            if (rel > worst) {
                worst = rel;
                worst_alpha = basis.exponents[static_cast<size_t>(a)];
            }
        }
        if (worst > tol.moment_tol)
            throw MomentMismatch("normal_m_dilation: POVM moments do not match powers of T",
                                 worst_alpha, worst);
    }

    DiscretePOVM reduced = reduce(checked, basis, tol, reduce_report);

    std::vector<Matrix> weights;
    weights.reserve(reduced.atoms.size());
    for (const PovmAtom& a : reduced.atoms) weights.push_back(a.weight);
    NaimarkDilation nd = naimark(weights, tol);

    // N_i = sum_j w_{i,j} E_j: block diagonal with scalar blocks.
    std::vector<Matrix> normals(static_cast<size_t>(T.n));
    for (int i = 0; i < T.n; ++i) {
        std::vector<Complex> h(static_cast<size_t>(nd.M));
        for (int j = 0; j < nd.M; ++j) h[static_cast<size_t>(j)] = reduced.atoms[static_cast<size_t>(j)].point(i);
        normals[static_cast<size_t>(i)] = nd.scalar_combination(h);
    }

    MDilation dil;
    dil.tuple_N.n = T.n;
    dil.tuple_N.d = nd.D();
    dil.tuple_N.matrices = std::move(normals);
    dil.tuple_N.commutation_residual = commutation_residual(dil.tuple_N.matrices);
    dil.V = nd.V;
    dil.m = m;
    dil.support.reserve(reduced.atoms.size());
    for (const PovmAtom& a : reduced.atoms) dil.support.push_back(a.point);

    VerificationReport check = verify_m_dilation(T, dil, m, tol, seed);
    if (check.max_residual > 1e-6)
        throw NumericalError("normal_m_dilation: verification residual " +
                             std::to_string(check.max_residual) + " above 1e-6");
    return dil;
}

VerificationReport verify_m_dilation(const MatrixTuple& T, const MDilation& dil, int m,
                                     const ToleranceConfig& tol, std::uint64_t seed) {
    if (dil.V.cols() != T.d || dil.V.rows() != dil.tuple_N.d)
        throw DimensionError("verify_m_dilation: embedding shape mismatch");

    VerificationReport report;
    report.atoms = static_cast<int>(dil.support.size());
    report.dimension = dil.tuple_N.d;
    report.isometry_residual =
        operator_norm(dil.V.adjoint() * dil.V - Matrix::Identity(T.d, T.d));

    const MomentBasis basis = MomentBasis::graded(T.n, m);
    const std::vector<Matrix> t_pow = all_powers(T, basis);
    std::vector<Matrix> n_pow = all_powers(dil.tuple_N, basis);
    for (Matrix& p : n_pow) p = dil.V.adjoint() * p * dil.V;

    const std::vector<double> residuals = kernels::residual_norms(t_pow, n_pow);
    report.rows.reserve(residuals.size());
    for (size_t a = 0; a < residuals.size(); ++a) {
        report.rows.push_back({basis.exponents[a], residuals[a]});
        report.max_residual = std::max(report.max_residual, residuals[a]);
    }

    for (const Matrix& nm : dil.tuple_N.matrices)
        report.normality.push_back(operator_norm(nm * nm.adjoint() - nm.adjoint() * nm));

    // Joint spectrum of N must sit on the declared support.
    double max_abs = 1.0;
    for (const Vector& w : dil.support) max_abs = std::max(max_abs, w.lpNorm<Eigen::Infinity>());
    const double radius = tol.cluster_tol * (1.0 + max_abs);
    JointSpectrum js = joint_spectrum(dil.tuple_N, tol, seed);
    report.support_distance = 0.0;
    for (const Vector& p : js.points) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const Vector& w : dil.support) nearest = std::min(nearest, (p - w).norm());
        report.support_distance = std::max(report.support_distance, nearest);
    }
    report.support_contained = report.support_distance <= radius;
    return report;
}

Matrix unitary_1_dilation(const Matrix& T, const ToleranceConfig& tol) {
    if (T.rows() != T.cols()) throw DimensionError("unitary_1_dilation: matrix must be square");
    const Eigen::Index d = T.rows();
    const double norm = operator_norm(T);
    if (norm > 1.0 + tol.eig_floor)
        throw NotContraction("unitary_1_dilation: ||T|| = " + std::to_string(norm));

    const Matrix eye = Matrix::Identity(d, d);
    const Matrix defect_left = psd_sqrt(eye - T * T.adjoint(), tol);
    const Matrix defect_right = psd_sqrt(eye - T.adjoint() * T, tol);

    Matrix u(2 * d, 2 * d);
    u.topLeftCorner(d, d) = T;
    u.topRightCorner(d, d) = defect_left;
    u.bottomLeftCorner(d, d) = defect_right;
    u.bottomRightCorner(d, d) = -T.adjoint();
    return u;
}

Complex evaluate_certificate(const std::vector<CertificateFactor>& factors, const Vector& z) {
    Complex acc(1.0, 0.0);
    for (const CertificateFactor& f : factors) acc *= z(f.coordinate) - f.root;
    return acc;
}

HullResult finite_hull_membership(const FiniteXSet& X, const Vector& z,
                                  const ToleranceConfig& tol) {
    if (X.points.empty()) throw ValidationError("finite_hull_membership: empty set");
    if (z.size() != X.n) throw DimensionError("finite_hull_membership: point dimension mismatch");

    HullResult result;
    // Inside = coincides with a set point coordinatewise within cluster_tol.
    for (const Vector& w : X.points) {
        if ((z - w).lpNorm<Eigen::Infinity>() <= tol.cluster_tol) {
            result.inside = true;
            return result;
        }
    }

    // One factor per set point, on the coordinate of widest separation.
    for (const Vector& w : X.points) {
        int best_coord = -1;
        double best_gap = 0.0;
        for (int j = 0; j < X.n; ++j) {
            const double gap = std::abs(z(j) - w(j));
            if (gap > best_gap) {
                best_gap = gap;
                best_coord = j;
            }
        }
        if (best_coord < 0 || best_gap <= tol.cluster_tol)
            throw DegenerateCertificate(
                "finite_hull_membership: outside point nearly coincides with a set point");
        result.certificate.push_back({best_coord, w(best_coord)});
    }

    result.value_at_z = std::abs(evaluate_certificate(result.certificate, z));
    for (const Vector& w : X.points)
        result.max_over_set =
            std::max(result.max_over_set, std::abs(evaluate_certificate(result.certificate, w)));
    return result;
}

SpectralCheckReport sampled_spectral_check(const MatrixTuple& T,
                                           const std::vector<Vector>& sample_points, int m,
                                           int trials, std::uint64_t seed,
                                           const ToleranceConfig& tol,
                                           const std::optional<FiniteXSet>& finite_X,
                                           double margin, int block_size) {
    if (sample_points.empty())
        throw ValidationError("sampled_spectral_check: no sample points");
    SpectralCheckReport report;
    report.trials = trials;
    report.margin = margin;

    const MomentBasis basis = MomentBasis::graded(T.n, m);
    const std::vector<double> gaps =
        kernels::spectral_trial_gaps(T, sample_points, basis, trials, seed);
    for (double g : gaps) {
        report.max_gap = std::max(report.max_gap, g);
        if (g > margin) ++report.violations;
    }

    if (block_size > 1) {
        // Matrix polynomials with l x l coefficient blocks: evaluate
        // Q(T) = sum_alpha C_alpha (x) T^alpha against sup_x ||Q(x)||.
        const std::vector<Matrix> t_pow = all_powers(T, basis);
        for (int trial = 0; trial < trials; ++trial) {
            Rng rng(derive_seed(seed ^ 0xb10cULL, static_cast<std::uint64_t>(trial)));
            std::vector<Matrix> coeff(static_cast<size_t>(basis.monomial_count()));
            for (Matrix& c : coeff) c = rng.matrix(block_size, block_size);
            Matrix big = Matrix::Zero(static_cast<Eigen::Index>(block_size) * T.d,
                                      static_cast<Eigen::Index>(block_size) * T.d);
            for (int a = 0; a < basis.monomial_count(); ++a)
                for (int bi = 0; bi < block_size; ++bi)
                    for (int bj = 0; bj < block_size; ++bj)
                        big.block(static_cast<Eigen::Index>(bi) * T.d,
                                  static_cast<Eigen::Index>(bj) * T.d, T.d, T.d) +=
                            coeff[static_cast<size_t>(a)](bi, bj) * t_pow[static_cast<size_t>(a)];
            double sup = 0.0;
            for (const Vector& x : sample_points) {
                Matrix qx = Matrix::Zero(block_size, block_size);
                for (int a = 0; a < basis.monomial_count(); ++a)
                    qx += basis.eval_monomial(a, x) * coeff[static_cast<size_t>(a)];
                sup = std::max(sup, operator_norm(qx));
            }
            const double gap = operator_norm(big) - sup;
            report.max_gap = std::max(report.max_gap, gap);
            if (gap > margin) ++report.violations;
        }
    }

    if (finite_X) {
        report.spectrum_checked = true;
        JointSpectrum js = joint_spectrum(T, tol, seed);
        for (const Vector& p : js.points) {
            HullResult h = finite_hull_membership(*finite_X, p, tol);
            if (!h.inside) ++report.spectrum_points_outside;
        }
    }
    return report;
}

}  // namespace forge
