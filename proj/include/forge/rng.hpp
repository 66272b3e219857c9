#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "forge/types.hpp"

namespace forge {

// Deterministic generators used by samplers, tests and the benchmark.
// Everything takes an explicit seed; nothing reads ambient state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    double gaussian();
    Complex complex_gaussian();

    /// iid complex Gaussian entries.
    Matrix matrix(int rows, int cols);

    /// Haar-ish unitary: QR of a Gaussian matrix with the R diagonal phases fixed.
    Matrix unitary(int d);

    /// Random matrix rescaled to the requested operator norm.
    Matrix contraction(int d, double norm);

    /// Hermitian PSD with unit trace.
    Matrix psd(int d);

    /// n commuting d x d matrices. When `normal` all members are normal
    /// (common unitary eigenbasis); otherwise a mildly non-normal similarity
    /// is used so the tuple is still simultaneously diagonalizable.
    std::vector<Matrix> commuting_tuple(int n, int d, bool normal);

    /// Same construction but also reports the planted joint points
    /// (d tuples in C^n, aligned with a common eigenbasis).
    std::vector<Matrix> commuting_tuple_with_spectrum(int n, int d, bool normal,
                                                      std::vector<Vector>* joint_points);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Stable per-task seed derivation (splitmix64 step), so parallel trials can
/// each own an independent stream without sharing the engine.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace forge
