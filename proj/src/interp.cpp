#include "forge/interp.hpp"

#include "forge/errors.hpp"
#include "forge/linalg.hpp"

namespace forge {

LowerToeplitz LowerToeplitz::from_coeffs(std::vector<Complex> coeffs) {
    if (coeffs.empty()) throw DimensionError("LowerToeplitz: need at least one coefficient");
    LowerToeplitz t;
    t.d = static_cast<int>(coeffs.size());
    t.symbol_coeffs = std::move(coeffs);
    return t;
}

Matrix LowerToeplitz::materialize() const {
    Matrix a = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = symbol_coeffs[static_cast<size_t>(i - j)];
    return a;
}

Matrix nilpotent_shift(int d) {
    if (d < 1) throw DimensionError("nilpotent_shift: dimension must be positive");
    Matrix s = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) s(i, i - 1) = 1.0;
    return s;
}

Matrix eval_symbol_at_shift(const std::vector<Complex>& coeffs, int d) {
    if (static_cast<int>(coeffs.size()) != d)
        throw DimensionError("eval_symbol_at_shift: need exactly d coefficients");
    const Matrix s = nilpotent_shift(d);
    Matrix power = Matrix::Identity(d, d);
    Matrix acc = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        acc += coeffs[static_cast<size_t>(k)] * power;  // disjoint 0/1 supports, no rounding
        if (k + 1 < d) power = power * s;
    }
    return acc;
}

bool toeplitz_contraction_test(const LowerToeplitz& a, double tol) {
    return operator_norm(a.materialize()) <= 1.0 + tol;
}

}  // namespace forge
