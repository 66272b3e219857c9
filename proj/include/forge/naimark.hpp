#pragma once

#include <vector>

#include "forge/linalg.hpp"
#include "forge/types.hpp"

namespace forge {

// Finite Naimark dilation of a resolution of the identity: an isometry
// V : C^d -> C^D with D = M*d, plus M mutually orthogonal coordinate-block
// projections summing to I_D with V* E_j V = A_j. The blocks are stored
// implicitly (offset j*d, size d); projection(j) materializes one on demand.
struct NaimarkDilation {
    Matrix V;   // D x d
    int M = 0;
    int d = 0;

    int D() const { return M * d; }
    Matrix projection(int j) const;
    /// V* E_j V without materializing E_j.
    Matrix compress(int j) const;
    /// sum_j h(j) E_j as a dense D x D block-diagonal matrix.
    Matrix scalar_combination(const std::vector<Complex>& h) const;
};

/// Build the dilation by stacking PSD square roots of the weights. The
/// weight list is symmetrically renormalized first so V*V = I holds to
/// round-off even when the input sums to I only within moment_tol.
NaimarkDilation naimark(const std::vector<Matrix>& weights, const ToleranceConfig& tol);

}  // namespace forge
