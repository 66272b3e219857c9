#pragma once

#include <functional>
#include <vector>

#include "forge/kernels.hpp"
#include "forge/povm.hpp"
#include "forge/types.hpp"

namespace forge {

/// R-linear embedding of a d x d complex matrix into R^{2d^2}: entries
/// row-major, (Re, Im) interleaved.
RealVector real_embed(const Matrix& m);

/// Embedded vector of (weight, point): real_embed(weight) followed by
/// g_i(point) * real_embed(weight) for every real split function of the
/// basis. Length 2 d^2 L.
RealVector feature_vector(const Matrix& weight, const Vector& point, const MomentBasis& basis);

struct ReduceOptions {
    // Extra columns kept beyond the atom bound while sweeping pieces through
    // the working window. 0 picks a default proportional to the bound.
    int window_slack = 0;
    // Use every numerical nullvector of one decomposition before refilling.
    bool batch_pivots = true;
};

struct ReduceReport {
    int input_atoms = 0;
    int output_atoms = 0;
    int input_pieces = 0;
    int atom_bound = 0;       // 2 d^2 L + 1
    int iterations = 0;       // elimination pivots performed
    int decompositions = 0;   // SVDs taken
    double smallest_sigma = 0.0;      // last nullspace singular value used
    double max_moment_drift = 0.0;    // worst relative basis-moment change
    std::vector<double> per_monomial_drift;
};

// Snapshot handed to the iteration observer after every pivot: the surviving
// conic coefficients plus the piece bookkeeping needed to replay moments.
struct ReduceSnapshot {
    int iteration = 0;
    const kernels::RankOnePieces* pieces = nullptr;
    const std::vector<Vector>* points = nullptr;
    const std::vector<int>* alive = nullptr;  // indices with lambda > 0
};

using ReduceObserver = std::function<void(const ReduceSnapshot&)>;

// Thrown when the working window still exceeds the bound but its feature
// matrix has no numerical nullvector; carries what was assembled so far.
struct NullspaceNotFound : NumericalError {
    NullspaceNotFound(const std::string& what, DiscretePOVM partial_, double sigma, int pieces_)
        : NumericalError(what), partial(std::move(partial_)), smallest_sigma(sigma),
          piece_count(pieces_) {}
    DiscretePOVM partial;
    double smallest_sigma = 0.0;
    int piece_count = 0;
};

/// Carathéodory recombination: reduce a discrete POVM to at most 2 d^2 L + 1
/// atoms matching every basis moment. Weights are expanded into rank-one
/// pieces, eliminated along nullvectors of the feature matrix, re-merged by
/// support point and symmetrically renormalized.
DiscretePOVM reduce(const DiscretePOVM& povm, const MomentBasis& basis,
                    const ToleranceConfig& tol, ReduceReport* report = nullptr,
                    const ReduceOptions& options = {}, const ReduceObserver& observer = {});

/// Literal one-pivot-per-decomposition variant operating on the full piece
/// set. Reference implementation for tests; cost grows quickly with atoms.
DiscretePOVM reduce_reference(const DiscretePOVM& povm, const MomentBasis& basis,
                              const ToleranceConfig& tol, ReduceReport* report = nullptr,
                              const ReduceObserver& observer = {});

}  // namespace forge
