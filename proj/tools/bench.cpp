// forge-bench: timing harness for the data-parallel kernels.
//
// Runs every kernel in its serial reference form and its OpenMP form on the
// same synthetic inputs, checks the outputs agree bitwise, and prints a
// speedup table. Sizes stay small enough for a laptop run.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <vector>

#include "forge/cubature.hpp"
#include "forge/kernels.hpp"
#include "forge/povm.hpp"
#include "forge/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_of(const std::function<void()>& f) {
    const auto start = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool bitwise_equal(const forge::Matrix& a, const forge::Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return std::memcmp(a.data(), b.data(), sizeof(forge::Complex) * static_cast<size_t>(a.size())) == 0;
}

bool bitwise_equal(const std::vector<forge::Matrix>& a, const std::vector<forge::Matrix>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!bitwise_equal(a[i], b[i])) return false;
    return true;
}

forge::DiscretePOVM synthetic_povm(int n, int d, int atoms, std::uint64_t seed) {
    forge::Rng rng(seed);
    forge::DiscretePOVM povm;
    povm.n = n;
    povm.d = d;
    std::vector<forge::Matrix> raw;
    forge::Matrix sum = forge::Matrix::Zero(d, d);
    for (int j = 0; j < atoms; ++j) {
        forge::Matrix w = rng.psd(d);
        sum += w;
        raw.push_back(std::move(w));
    }
    forge::ToleranceConfig tol;
    const forge::Matrix fix = forge::psd_inv_sqrt(sum, tol);
    for (int j = 0; j < atoms; ++j) {
        forge::PovmAtom atom;
        atom.point = forge::Vector(n);
        for (int i = 0; i < n; ++i)
            atom.point(i) = forge::Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        forge::Matrix w = fix * raw[static_cast<size_t>(j)] * fix;
        atom.weight = 0.5 * (w + w.adjoint());
        povm.atoms.push_back(std::move(atom));
    }
    return povm;
}

void row(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-22s %10.4fs %10.4fs %8.2fx   %s\n", name, serial, parallel,
                serial / parallel, agree ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run the serial path\n\n");
#endif
    std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    const forge::DiscretePOVM povm = synthetic_povm(2, 3, 6000, 42);
    const forge::MomentBasis basis = forge::MomentBasis::graded(2, 3);

    {
        std::vector<forge::Matrix> s, p;
        const double ts = seconds_of([&] { s = forge::kernels::povm_moments_serial(povm, basis); });
        const double tp = seconds_of([&] { p = forge::kernels::povm_moments_parallel(povm, basis); });
        row("povm_moments", ts, tp, bitwise_equal(s, p));
    }

    {
        forge::kernels::RankOnePieces pieces;
        pieces.d = povm.d;
        std::vector<forge::Vector> points;
        forge::Rng rng(7);
        for (size_t j = 0; j < povm.atoms.size(); ++j) {
            points.push_back(povm.atoms[j].point);
            forge::Vector u = rng.matrix(povm.d, 1).col(0);
            u.normalize();
            pieces.atom.push_back(static_cast<int>(j));
            pieces.direction.push_back(u);
            pieces.lambda.push_back(1.0);
        }
        std::vector<int> active(pieces.lambda.size());
        std::iota(active.begin(), active.end(), 0);
        forge::RealMatrix s, p;
        const double ts = seconds_of(
            [&] { s = forge::kernels::feature_matrix_serial(pieces, points, active, basis); });
        const double tp = seconds_of(
            [&] { p = forge::kernels::feature_matrix_parallel(pieces, points, active, basis); });
        const bool agree = s.rows() == p.rows() && s.cols() == p.cols() &&
                           std::memcmp(s.data(), p.data(),
                                       sizeof(double) * static_cast<size_t>(s.size())) == 0;
        row("feature_matrix", ts, tp, agree);
    }

    {
        forge::Rng rng(11);
        const forge::Matrix t = rng.contraction(8, 0.85);
        std::vector<forge::Matrix> s, p;
        const double ts = seconds_of([&] { s = forge::kernels::poisson_weights_serial(t, 16384); });
        const double tp =
            seconds_of([&] { p = forge::kernels::poisson_weights_parallel(t, 16384); });
        row("poisson_weights", ts, tp, bitwise_equal(s, p));
    }

    {
        forge::Rng rng(13);
        forge::MatrixTuple tuple = forge::MatrixTuple::make(rng.commuting_tuple(2, 6, true), 1e-8);
        std::vector<forge::Vector> samples;
        for (int i = 0; i < 400; ++i) {
            forge::Vector x(2);
            x(0) = forge::Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            x(1) = forge::Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            samples.push_back(x);
        }
        std::vector<double> s, p;
        const double ts = seconds_of([&] {
            s = forge::kernels::spectral_trial_gaps_serial(tuple, samples, basis, 400, 99);
        });
        const double tp = seconds_of([&] {
            p = forge::kernels::spectral_trial_gaps_parallel(tuple, samples, basis, 400, 99);
        });
        row("spectral_trial_gaps", ts, tp,
            std::memcmp(s.data(), p.data(), sizeof(double) * s.size()) == 0);
    }

    return 0;
}
