#pragma once

#include <string>
#include <vector>

#include "forge/spectrum.hpp"
#include "forge/types.hpp"

namespace forge {

// Finite list of (point in C^n, PSD d x d weight) atoms whose weights sum to
// the identity. Houses both measures fed into the pipeline and the reduced
// node sets coming out of it.
struct PovmAtom {
    Vector point;   // length n
    Matrix weight;  // d x d
};

struct DiscretePOVM {
    int n = 0;
    int d = 0;
    std::vector<PovmAtom> atoms;
    double normalization_residual = 0.0;  // ||sum weights - I||

    Matrix weight_sum() const;
    double max_point_norm() const;
};

struct PovmDiagnostics {
    bool ok = false;
    double min_weight_eigenvalue = 0.0;
    double max_hermiticity_residual = 0.0;
    double normalization_residual = 0.0;
    int merges_performed = 0;
    std::string failure;  // empty when ok
};

/// Validate invariants; near-duplicate points (within cluster_tol scaled by
/// the cloud size) are merged by weight addition before checking. The povm is
/// modified in place only by those merges. Throws NotPSD / NotNormalized when
/// a bound is violated; the returned report carries the measured values.
PovmDiagnostics validate(DiscretePOVM& povm, const ToleranceConfig& tol);

/// Non-throwing variant: same checks, failures land in the report.
PovmDiagnostics inspect(const DiscretePOVM& povm, const ToleranceConfig& tol);

// Multi-indices |alpha| <= m in graded lexicographic order (constant first),
// plus the real/imaginary split bookkeeping of the non-constant monomials.
struct MomentBasis {
    int n = 0;
    int m = 0;
    std::vector<std::vector<int>> exponents;  // C(n+m, n) entries, exponents[0] == 0

    static MomentBasis graded(int n, int m);

    int monomial_count() const { return static_cast<int>(exponents.size()); }
    int real_function_count() const { return 2 * (monomial_count() - 1); }  // k
    int feature_blocks() const { return real_function_count() + 1; }        // L = k + 1

    Complex eval_monomial(int idx, const Vector& z) const;
    /// g_{2j-1} = Re z^{alpha_j}, g_{2j} = Im z^{alpha_j}, j = 1..count-1; 1-based.
    double eval_real(int g_idx, const Vector& z) const;
};

Complex monomial_value(const Vector& z, const std::vector<int>& alpha);

/// Matrix moments sum_j z_j^alpha A_j for every basis monomial, atom order
/// ascending within each sum.
std::vector<Matrix> moments(const DiscretePOVM& povm, const MomentBasis& basis);

/// Compression of the spectral measure of a commuting normal tuple by an
/// isometry embed : C^h -> C^D. Joint eigenvalues are clustered within
/// cluster_tol; atom weights are V* E_j V for the spectral projections E_j.
DiscretePOVM compress_spectral(const MatrixTuple& normal_tuple, const Matrix& embed,
                               const ToleranceConfig& tol,
                               std::uint64_t seed = kDefaultCombinationSeed);

/// Moment-matching measure on the unit circle for a strict contraction
/// (n = 1): R uniform grid points carrying the operator Poisson kernel,
/// symmetrically renormalized so the weights sum to the identity exactly.
DiscretePOVM poisson_povm(const Matrix& t, int resolution, const ToleranceConfig& tol);

}  // namespace forge
