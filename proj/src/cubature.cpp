#include "forge/cubature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "forge/linalg.hpp"

namespace forge {

RealVector real_embed(const Matrix& m) {
    RealVector v(2 * m.rows() * m.cols());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            v(k++) = m(i, j).real();
            v(k++) = m(i, j).imag();
        }
    return v;
}

RealVector feature_vector(const Matrix& weight, const Vector& point, const MomentBasis& basis) {
    const Eigen::Index block = 2 * weight.rows() * weight.cols();
    const int L = basis.feature_blocks();
    RealVector embedded = real_embed(weight);
    RealVector v(block * L);
    v.segment(0, block) = embedded;  // the constant function
    for (int g = 1; g <= basis.real_function_count(); ++g)
        v.segment(block * g, block) = basis.eval_real(g, point) * embedded;
    return v;
}

namespace {

struct PieceSet {
    kernels::RankOnePieces pieces;
    std::vector<Vector> points;  // one per input atom
    RealMatrix feature_cache;    // column per piece, fixed for its lifetime
};

// Expand every atom into rank-one eigenpieces, dropping dust below eig_floor.
PieceSet expand_pieces(const DiscretePOVM& povm, const MomentBasis& basis,
                       const ToleranceConfig& tol) {
    PieceSet set;
    set.pieces.d = povm.d;
    set.points.reserve(povm.atoms.size());
    for (size_t j = 0; j < povm.atoms.size(); ++j) {
        const PovmAtom& atom = povm.atoms[j];
        set.points.push_back(atom.point);
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(atom.weight));
        if (es.info() != Eigen::Success)
            throw NumericalError("reduce: weight eigendecomposition failed");
        for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t) {
            const double lam = es.eigenvalues()(t);
            if (lam < tol.eig_floor) continue;
            set.pieces.atom.push_back(static_cast<int>(j));
            set.pieces.direction.push_back(es.eigenvectors().col(t));
            set.pieces.lambda.push_back(lam);
        }
    }
    std::vector<int> all(set.pieces.lambda.size());
    std::iota(all.begin(), all.end(), 0);
    set.feature_cache = kernels::feature_matrix(set.pieces, set.points, all, basis);
    return set;
}

// ||F_active c|| without materializing the gathered matrix.
double null_residual(const RealMatrix& cache, const std::vector<int>& active,
                     const RealVector& c) {
    RealVector acc = RealVector::Zero(cache.rows());
    for (size_t r = 0; r < active.size(); ++r)
        acc += c(static_cast<Eigen::Index>(r)) * cache.col(active[r]);
    return acc.norm();
}

// Merge surviving pieces per atom and renormalize so the weights sum to the
// identity to round-off.
DiscretePOVM assemble_output(const DiscretePOVM& input, const PieceSet& set,
                             const std::vector<int>& alive, const ToleranceConfig& tol) {
    std::vector<std::vector<int>> by_atom(input.atoms.size());
    for (int p : alive)
        by_atom[static_cast<size_t>(set.pieces.atom[static_cast<size_t>(p)])].push_back(p);

    DiscretePOVM out;
    out.n = input.n;
    out.d = input.d;
    for (size_t j = 0; j < by_atom.size(); ++j) {
        if (by_atom[j].empty()) continue;
        Matrix w = Matrix::Zero(input.d, input.d);
        for (int p : by_atom[j]) {
            const Vector& u = set.pieces.direction[static_cast<size_t>(p)];
            w += set.pieces.lambda[static_cast<size_t>(p)] * (u * u.adjoint());
        }
        if (min_eigenvalue(w) < 0.0) w = psd_clamp(w, tol);
        PovmAtom atom;
        atom.point = set.points[j];
        atom.weight = std::move(w);
        out.atoms.push_back(std::move(atom));
    }
    if (out.atoms.empty()) throw NumericalError("reduce: all pieces eliminated");

    Matrix s = out.weight_sum();
    if (operator_norm(s - Matrix::Identity(input.d, input.d)) > tol.moment_tol)
        throw NotNormalized("reduce: weight sum drifted before renormalization");
    const Matrix s_inv_sqrt = psd_inv_sqrt(s, tol);
    for (PovmAtom& atom : out.atoms) {
        Matrix w = s_inv_sqrt * atom.weight * s_inv_sqrt;
        atom.weight = 0.5 * (w + w.adjoint());
    }
    out.normalization_residual =
        operator_norm(out.weight_sum() - Matrix::Identity(input.d, input.d));
    return out;
}

void fill_drift_report(const DiscretePOVM& input, const DiscretePOVM& output,
                       const MomentBasis& basis, ReduceReport& report) {
    const std::vector<Matrix> before = kernels::povm_moments(input, basis);
    const std::vector<Matrix> after = kernels::povm_moments(output, basis);
    report.per_monomial_drift.resize(before.size());
    report.max_moment_drift = 0.0;
    for (size_t a = 0; a < before.size(); ++a) {
        const double rel = operator_norm(after[a] - before[a]) / (1.0 + operator_norm(before[a]));
        report.per_monomial_drift[a] = rel;
        report.max_moment_drift = std::max(report.max_moment_drift, rel);
    }
}

void notify(const ReduceObserver& observer, int iteration, const PieceSet& set,
            const std::vector<int>& alive) {
    if (!observer) return;
    ReduceSnapshot snap;
    snap.iteration = iteration;
    snap.pieces = &set.pieces;
    snap.points = &set.points;
    snap.alive = &alive;
    observer(snap);
}

struct NullVec {
    RealVector v;
    bool consumed = false;
};

DiscretePOVM reduce_impl(const DiscretePOVM& input, const MomentBasis& basis,
                         const ToleranceConfig& tol, ReduceReport* report,
                         const ReduceOptions& options, const ReduceObserver& observer,
                         bool streaming) {
    tol.require_positive();
    if (basis.exponents.empty() ||
        !std::all_of(basis.exponents[0].begin(), basis.exponents[0].end(),
                     [](int e) { return e == 0; }))
        throw ConstantMissing("reduce: basis must contain the constant monomial");
    if (basis.n != input.n) throw DimensionError("reduce: basis/povm variable count mismatch");

    DiscretePOVM povm = input;
    validate(povm, tol);

    const int bound = 2 * input.d * input.d * basis.feature_blocks() + 1;
    ReduceReport local;
    ReduceReport& rep = report ? *report : local;
    rep = ReduceReport{};
    rep.input_atoms = static_cast<int>(povm.atoms.size());
    rep.atom_bound = bound;

    if (static_cast<int>(povm.atoms.size()) <= bound) {
        rep.output_atoms = rep.input_atoms;
        rep.per_monomial_drift.assign(static_cast<size_t>(basis.monomial_count()), 0.0);
        return povm;  // already below the bound, pass through untouched
    }

    PieceSet set = expand_pieces(povm, basis, tol);
    const int total = static_cast<int>(set.pieces.lambda.size());
    rep.input_pieces = total;

    std::vector<int> alive(static_cast<size_t>(total));
    std::iota(alive.begin(), alive.end(), 0);

    // Streaming keeps a working window of bound + slack columns; the literal
    // variant operates on every piece at once.
    const int slack =
        streaming ? (options.window_slack > 0 ? options.window_slack : std::max(32, bound))
                  : std::max(total - bound, 1);
    const Eigen::Index rows = set.feature_cache.rows();

    std::vector<int> active;
    int next_piece = 0;
    auto refill = [&] {
        const int capacity = bound + slack;
        while (static_cast<int>(active.size()) < capacity && next_piece < total)
            active.push_back(next_piece++);
    };
    refill();
    notify(observer, 0, set, alive);

    std::vector<double>& lambda = set.pieces.lambda;

    while (static_cast<int>(active.size()) > bound) {
        RealMatrix f(rows, static_cast<Eigen::Index>(active.size()));
        for (size_t c = 0; c < active.size(); ++c)
            f.col(static_cast<Eigen::Index>(c)) = set.feature_cache.col(active[c]);
        Eigen::BDCSVD<RealMatrix> svd(f, Eigen::ComputeFullV);
        ++rep.decompositions;
        const auto& sigma = svd.singularValues();
        const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
        const double cutoff = tol.null_sigma * (1.0 + sigma_max);

        // Null directions ascending by singular value: the columns of V past
        // min(rows, cols) carry implicit zeros, then computed ones under the
        // cutoff.
        const Eigen::Index cols = f.cols();
        const Eigen::Index computed = std::min(rows, cols);
        std::vector<NullVec> vecs;
        for (Eigen::Index i = cols - 1; i >= computed; --i)
            vecs.push_back({svd.matrixV().col(i), false});
        for (Eigen::Index i = computed - 1; i >= 0 && sigma(i) <= cutoff; --i)
            vecs.push_back({svd.matrixV().col(i), false});

        bool progressed = false;
        for (size_t cursor = 0; cursor < vecs.size() && static_cast<int>(active.size()) > bound;
             ++cursor) {
            if (vecs[cursor].consumed) continue;
            RealVector c = vecs[cursor].v;
            vecs[cursor].consumed = true;
            if (c.lpNorm<Eigen::Infinity>() < 1e-12) continue;
            const double res = null_residual(set.feature_cache, active, c);
            if (res > cutoff) {
                if (!progressed)
                    throw NullspaceNotFound(
                        "reduce: no nullspace direction under the cutoff at the atom bound",
                        assemble_output(povm, set, alive, tol), res,
                        static_cast<int>(alive.size()));
                continue;  // degraded by earlier eliminations; next decomposition will refresh
            }
            rep.smallest_sigma = res;

            // Sign so the larger extreme is positive, keeping the pivot step bounded.
            if (c.maxCoeff() < -c.minCoeff()) c = -c;
            double t_star = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < c.size(); ++r)
                if (c(r) > 0.0)
                    t_star = std::min(t_star, lambda[static_cast<size_t>(active[static_cast<size_t>(r)])] / c(r));
            if (!std::isfinite(t_star)) continue;

            std::vector<int> zeroed;  // positions in the current window layout
            for (Eigen::Index r = 0; r < c.size(); ++r) {
                double& lam = lambda[static_cast<size_t>(active[static_cast<size_t>(r)])];
                lam -= t_star * c(r);
                if (lam <= tol.eig_floor) {
                    lam = 0.0;
                    zeroed.push_back(static_cast<int>(r));
                }
            }
            if (zeroed.empty())
                throw NumericalError("reduce: pivot eliminated no piece");
            progressed = true;
            ++rep.iterations;

            for (int r : zeroed) {
                const int piece = active[static_cast<size_t>(r)];
                auto it = std::lower_bound(alive.begin(), alive.end(), piece);
                if (it != alive.end() && *it == piece) alive.erase(it);
            }

            if (options.batch_pivots) {
                // Keep later directions null on the surviving columns: clear
                // each zeroed coordinate with one eliminator vector (the pivot
                // covers the first), then drop the eliminators.
                bool pivot_free = true;
                for (int z : zeroed) {
                    double best_mag = pivot_free ? std::abs(c(z)) : 0.0;
                    size_t best = vecs.size();  // sentinel = use pivot
                    for (size_t j = cursor + 1; j < vecs.size(); ++j) {
                        if (vecs[j].consumed) continue;
                        const double mag = std::abs(vecs[j].v(z));
                        if (mag > best_mag) {
                            best_mag = mag;
                            best = j;
                        }
                    }
                    if (best_mag <= 1e-10) {
                        for (size_t j = cursor + 1; j < vecs.size(); ++j)
                            if (!vecs[j].consumed) vecs[j].v(z) = 0.0;  // dust
                        continue;
                    }
                    const RealVector elim = best == vecs.size() ? c : vecs[best].v;
                    if (best == vecs.size())
                        pivot_free = false;
                    else
                        vecs[best].consumed = true;
                    for (size_t j = cursor + 1; j < vecs.size(); ++j) {
                        if (vecs[j].consumed) continue;
                        vecs[j].v -= (vecs[j].v(z) / elim(z)) * elim;
                    }
                }
                // Compact every live direction onto the surviving coordinates.
                for (size_t j = cursor + 1; j < vecs.size(); ++j) {
                    if (vecs[j].consumed) continue;
                    RealVector squeezed(
                        static_cast<Eigen::Index>(c.size() - static_cast<Eigen::Index>(zeroed.size())));
                    Eigen::Index w = 0;
                    size_t zpos = 0;
                    for (Eigen::Index r = 0; r < vecs[j].v.size(); ++r) {
                        if (zpos < zeroed.size() && static_cast<Eigen::Index>(zeroed[zpos]) == r) {
                            ++zpos;
                            continue;
                        }
                        squeezed(w++) = vecs[j].v(r);
                    }
                    const double norm = squeezed.lpNorm<Eigen::Infinity>();
                    if (norm < 1e-12)
                        vecs[j].consumed = true;
                    else
                        vecs[j].v = squeezed / norm;
                }
            } else {
                for (size_t j = cursor + 1; j < vecs.size(); ++j) vecs[j].consumed = true;
            }

            for (auto it = zeroed.rbegin(); it != zeroed.rend(); ++it)
                active.erase(active.begin() + *it);
            notify(observer, rep.iterations, set, alive);
        }
        if (!progressed)
            throw NullspaceNotFound("reduce: no usable nullspace direction",
                                    assemble_output(povm, set, alive, tol), rep.smallest_sigma,
                                    static_cast<int>(alive.size()));
        refill();
    }

    DiscretePOVM out = assemble_output(povm, set, alive, tol);
    rep.output_atoms = static_cast<int>(out.atoms.size());
    fill_drift_report(povm, out, basis, rep);
    if (rep.max_moment_drift > tol.moment_tol)
        throw NumericalError("reduce: moment drift " + std::to_string(rep.max_moment_drift) +
                             " exceeds tolerance");
    return out;
}

}  // namespace

DiscretePOVM reduce(const DiscretePOVM& povm, const MomentBasis& basis,
                    const ToleranceConfig& tol, ReduceReport* report,
                    const ReduceOptions& options, const ReduceObserver& observer) {
    return reduce_impl(povm, basis, tol, report, options, observer, /*streaming=*/true);
}

DiscretePOVM reduce_reference(const DiscretePOVM& povm, const MomentBasis& basis,
                              const ToleranceConfig& tol, ReduceReport* report,
                              const ReduceObserver& observer) {
    ReduceOptions options;
    options.batch_pivots = false;
    return reduce_impl(povm, basis, tol, report, options, observer, /*streaming=*/false);
}

}  // namespace forge
