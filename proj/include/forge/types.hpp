#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace forge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;   // dense complex, row/col indexed
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Every tolerance the library consults lives here and is threaded explicitly
// through the call chain; there are no hidden global knobs.
struct ToleranceConfig {
    double eig_floor = 1e-10;    // eigenvalues in [-eig_floor, 0) clamp to 0; below is an error
    double null_sigma = 1e-9;    // singular values below null_sigma * scale count as zero
    double moment_tol = 1e-8;    // moment matching / POVM normalization
    double cluster_tol = 1e-8;   // merging nearly equal spectral points
    double unitary_tol = 1e-10;  // isometry / projection / normality residuals

    void require_positive() const;
};

// Seed for the generic linear combination used when triangularizing a tuple.
// Callers can override it; the default keeps library-internal calls reproducible.
inline constexpr std::uint64_t kDefaultCombinationSeed = 0x5a17ec0ffee0d11aULL;

}  // namespace forge
