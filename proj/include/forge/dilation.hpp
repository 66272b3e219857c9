#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/cubature.hpp"
#include "forge/naimark.hpp"
#include "forge/povm.hpp"
#include "forge/spectrum.hpp"
#include "forge/types.hpp"

namespace forge {

// Commuting normal tuple N on C^D, the embedding isometry, the degree it
// reproduces, and the support its joint spectrum lands on.
struct MDilation {
    MatrixTuple tuple_N;
    Matrix V;  // D x d
    int m = 0;
    std::vector<Vector> support;
    std::string source_povm_id;
};

struct VerificationRow {
    std::vector<int> alpha;
    double residual = 0.0;
};

struct VerificationReport {
    double max_residual = 0.0;
    std::vector<VerificationRow> rows;       // graded-lex over |alpha| <= m
    std::vector<double> normality;           // ||N_i N_i* - N_i* N_i|| per i
    double isometry_residual = 0.0;          // ||V*V - I||
    bool support_contained = false;
    double support_distance = 0.0;           // worst spectrum-to-support gap
    int atoms = 0;
    int dimension = 0;
};

/// Build the normal dilation reproducing T^alpha for |alpha| <= m from a
/// moment-matching POVM: recombine the measure, dilate the reduced weights,
/// and set N_i = sum_j w_{i,j} E_j. Throws MomentMismatch when the POVM does
/// not match the powers of T within moment_tol, and NumericalError if the
/// assembled dilation misses the 1e-6 verification gate.
MDilation normal_m_dilation(const MatrixTuple& T, const DiscretePOVM& povm, int m,
                            const ToleranceConfig& tol,
                            std::uint64_t seed = kDefaultCombinationSeed,
                            ReduceReport* reduce_report = nullptr);

/// Residual table ||T^alpha - V* N^alpha V|| for every |alpha| <= m, plus
/// normality and support diagnostics. Pure report, never throws on bad
/// dilations -- the numbers speak.
VerificationReport verify_m_dilation(const MatrixTuple& T, const MDilation& dil, int m,
                                     const ToleranceConfig& tol,
                                     std::uint64_t seed = kDefaultCombinationSeed);

/// Classical block construction [[T, (I-TT*)^{1/2}], [(I-T*T)^{1/2}, -T*]].
Matrix unitary_1_dilation(const Matrix& T, const ToleranceConfig& tol);

struct FiniteXSet {
    int n = 0;
    std::vector<Vector> points;  // pairwise distinct
};

// Product certificate: factors (z_{coordinate} - root), one per set point.
struct CertificateFactor {
    int coordinate = 0;
    Complex root;
};

struct HullResult {
    bool inside = false;
    std::vector<CertificateFactor> certificate;  // empty when inside
    double value_at_z = 0.0;                     // |p(z)|
    double max_over_set = 0.0;                   // max_X |p|
};

Complex evaluate_certificate(const std::vector<CertificateFactor>& factors, const Vector& z);

/// Membership in the polynomial hull of a finite set: inside iff z matches a
/// set point within cluster_tol (sup metric per coordinate); otherwise the
/// separating product polynomial is returned with its margin.
HullResult finite_hull_membership(const FiniteXSet& X, const Vector& z,
                                  const ToleranceConfig& tol);

struct SpectralCheckReport {
    int trials = 0;
    double max_gap = -1.0;  // max over trials of ||q(T)|| - max_x |q(x)|
    int violations = 0;     // trials with gap > margin
    double margin = 0.0;
    // Prop-style hull check of the joint spectrum against a finite X.
    bool spectrum_checked = false;
    int spectrum_points_outside = 0;
};

/// Sampled polynomial spectral-set check: seeded random polynomials of
/// degree <= m, compare ||q(T)|| with the sup over the sampled points.
/// When `finite_X` is set, the joint spectrum of T is also classified
/// against it. block_size > 1 additionally draws matrix polynomials with
/// block_size x block_size coefficient blocks.
SpectralCheckReport sampled_spectral_check(const MatrixTuple& T,
                                           const std::vector<Vector>& sample_points, int m,
                                           int trials, std::uint64_t seed,
                                           const ToleranceConfig& tol,
                                           const std::optional<FiniteXSet>& finite_X = {},
                                           double margin = 1e-6, int block_size = 1);

}  // namespace forge
