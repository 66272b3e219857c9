#pragma once

#include <vector>

#include "forge/types.hpp"

namespace forge {

// d x d lower triangular Toeplitz matrix, A[i][j] = a_{i-j} for i >= j.
struct LowerToeplitz {
    int d = 0;
    std::vector<Complex> symbol_coeffs;  // a_0 .. a_{d-1}

    static LowerToeplitz from_coeffs(std::vector<Complex> coeffs);
    Matrix materialize() const;
};

/// Subdiagonal-of-ones shift; S^d = 0, ||S|| = 1 for d >= 2.
Matrix nilpotent_shift(int d);

/// sum_k a_k S_d^k, accumulated from explicit shift powers. Entrywise exact:
/// the powers have disjoint 0/1 supports, so no rounding ever mixes terms.
Matrix eval_symbol_at_shift(const std::vector<Complex>& coeffs, int d);

/// ||A||_op <= 1 + tol; equivalent to the symbol extending to a unit-ball
/// disc-algebra function (the interpolant itself is not computed).
bool toeplitz_contraction_test(const LowerToeplitz& A, double tol);

}  // namespace forge
