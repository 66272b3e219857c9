#pragma once

#include <cstdint>
#include <vector>

#include "forge/povm.hpp"
#include "forge/types.hpp"

namespace forge::kernels {

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both fill every output slot through the identical
// per-slot code path (fixed summation order inside a slot), so results are
// bitwise equal regardless of thread count. Tests hold them to that.

bool parallel_enabled();

std::vector<Matrix> povm_moments_serial(const DiscretePOVM& povm, const MomentBasis& basis);
std::vector<Matrix> povm_moments_parallel(const DiscretePOVM& povm, const MomentBasis& basis);
std::vector<Matrix> povm_moments(const DiscretePOVM& povm, const MomentBasis& basis);

// Feature matrix of rank-one pieces: column r is the embedded vector of
// (dir_r dir_r*, point of atom_r) against the basis. 2 d^2 L rows.
struct RankOnePieces {
    int d = 0;
    std::vector<int> atom;          // index into points
    std::vector<Vector> direction;  // unit vectors in C^d
    std::vector<double> lambda;     // conic coefficients, >= 0
};

RealMatrix feature_matrix_serial(const RankOnePieces& pieces, const std::vector<Vector>& points,
                                 const std::vector<int>& active, const MomentBasis& basis);
RealMatrix feature_matrix_parallel(const RankOnePieces& pieces, const std::vector<Vector>& points,
                                   const std::vector<int>& active, const MomentBasis& basis);
RealMatrix feature_matrix(const RankOnePieces& pieces, const std::vector<Vector>& points,
                          const std::vector<int>& active, const MomentBasis& basis);

// Operator Poisson kernel weights at the R-point circle grid, unnormalized.
std::vector<Matrix> poisson_weights_serial(const Matrix& t, int resolution);
std::vector<Matrix> poisson_weights_parallel(const Matrix& t, int resolution);
std::vector<Matrix> poisson_weights(const Matrix& t, int resolution);

// Residual norms ||lhs_i - rhs_i||_op, one slot per row.
std::vector<double> residual_norms_serial(const std::vector<Matrix>& lhs,
                                          const std::vector<Matrix>& rhs);
std::vector<double> residual_norms_parallel(const std::vector<Matrix>& lhs,
                                            const std::vector<Matrix>& rhs);
std::vector<double> residual_norms(const std::vector<Matrix>& lhs, const std::vector<Matrix>& rhs);

// Per-trial spectral-set gaps ||q(T)|| - max_x |q(x)| with coefficients drawn
// from derive_seed(seed, trial); one independent stream per trial.
std::vector<double> spectral_trial_gaps_serial(const MatrixTuple& tuple,
                                               const std::vector<Vector>& sample_points,
                                               const MomentBasis& basis, int trials,
                                               std::uint64_t seed);
std::vector<double> spectral_trial_gaps_parallel(const MatrixTuple& tuple,
                                                 const std::vector<Vector>& sample_points,
                                                 const MomentBasis& basis, int trials,
                                                 std::uint64_t seed);
std::vector<double> spectral_trial_gaps(const MatrixTuple& tuple,
                                        const std::vector<Vector>& sample_points,
                                        const MomentBasis& basis, int trials, std::uint64_t seed);

}  // namespace forge::kernels
