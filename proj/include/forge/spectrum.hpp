#pragma once

#include <cstdint>
#include <vector>

#include "forge/linalg.hpp"
#include "forge/types.hpp"

namespace forge {

// Ordered list of n commuting d x d matrices. Construction certifies the
// commutation residual; everything downstream trusts it.
struct MatrixTuple {
    int n = 0;
    int d = 0;
    std::vector<Matrix> matrices;
    double commutation_residual = 0.0;

    /// Validates shapes and the pairwise commutator bound (residual <= tol).
    static MatrixTuple make(std::vector<Matrix> mats, double tol);

    const Matrix& operator[](int i) const { return matrices[static_cast<size_t>(i)]; }
};

// The d aligned diagonal tuples of a simultaneous triangularization,
// kept raw (with repetitions); consumers cluster when they need to.
struct JointSpectrum {
    std::vector<Vector> points;  // d points in C^n
};

struct TriangularForm {
    Matrix unitary;                // U with U* A_j U upper triangular
    std::vector<Matrix> triangular;
    double max_lower_mass = 0.0;   // worst strict-lower Frobenius mass, relative
    bool used_deflation = false;
};

/// Simultaneous unitary triangularization. Fast path: Schur form of a
/// seeded generic combination sum_i c_i A_i, verified against every member.
/// Fallback: recursive common-eigenvector deflation. Throws
/// TriangularizationFailed if neither path meets the residual bound
/// 1e-8 * (1 + ||A_j||) on every strict lower triangle.
TriangularForm simultaneous_triangularize(const MatrixTuple& tuple, const ToleranceConfig& tol,
                                          std::uint64_t seed = kDefaultCombinationSeed);

JointSpectrum joint_spectrum(const MatrixTuple& tuple, const ToleranceConfig& tol,
                             std::uint64_t seed = kDefaultCombinationSeed);

// Koszul complex of a tuple, materialized on the exterior-algebra basis
// e_{i1}...e_{ik}. stage_maps[k] sends stage k to stage k+1 and has
// d * C(n,k) columns; consecutive maps compose to ~0 by construction.
struct KoszulComplex {
    int n = 0;
    int d = 0;
    std::vector<Matrix> stage_maps;    // k = 0..n-1
    std::vector<Eigen::Index> stage_dims;  // d * C(n,k), k = 0..n

    static KoszulComplex build(const MatrixTuple& tuple);

    /// Max ||D^{k+1} D^k|| over consecutive pairs, relative to the map scale.
    double composition_residual() const;
};

/// Exactness test for the complex of (A - lambda): returns true iff some
/// stage fails rank(D^{k-1}) = nullity(D^k), ranks read from singular values
/// with the cutoff null_sigma * scale.
bool koszul_is_singular(const MatrixTuple& tuple, const Vector& lambda,
                        const ToleranceConfig& tol);

/// Spectrum of a single matrix, as an unordered multiset of eigenvalues.
std::vector<Complex> matrix_spectrum(const Matrix& m);

/// Evaluate a polynomial tuple power T^alpha = T_1^{a_1} ... T_n^{a_n}.
Matrix tuple_power(const MatrixTuple& tuple, const std::vector<int>& alpha);

}  // namespace forge
