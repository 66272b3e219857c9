#pragma once

#include <vector>

#include "forge/errors.hpp"
#include "forge/types.hpp"

namespace forge {

/// Largest singular value. Zero-sized matrices have norm 0.
double operator_norm(const Matrix& m);

double frobenius_norm(const Matrix& m);

bool is_finite(const Matrix& m);

/// ||M - M*|| <= tol * (1 + ||M||_F), Frobenius on both sides.
bool is_hermitian(const Matrix& m, double tol);

/// (M + M*) / 2
Matrix hermitian_part(const Matrix& m);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const Matrix& m);

/// Normalized pairwise commutator residual:
///   max_{i<j} ||A_i A_j - A_j A_i|| / (1 + ||A_i|| ||A_j||), operator norms.
double commutation_residual(const std::vector<Matrix>& mats);

/// True iff the residual above is <= tol. Throws DimensionError on ragged input.
bool commutes(const std::vector<Matrix>& mats, double tol);

/// Hermitian PSD square root. Eigenvalues in [-eig_floor, 0) clamp to 0;
/// anything more negative throws NotPSD. Input must be Hermitian up to
/// round-off; it is symmetrized before decomposing.
Matrix psd_sqrt(const Matrix& m, const ToleranceConfig& tol);

/// Inverse square root of a positive definite Hermitian matrix.
/// Throws NotPSD if the smallest eigenvalue is <= eig_floor.
Matrix psd_inv_sqrt(const Matrix& m, const ToleranceConfig& tol);

/// Clamp a Hermitian matrix onto the PSD cone: eigenvalues in
/// [-eig_floor, 0) go to 0, below -eig_floor throws NotPSD.
Matrix psd_clamp(const Matrix& m, const ToleranceConfig& tol);

}  // namespace forge
