// dilation-forge: file-based front end for the dilation pipeline.
//
// Subcommands mirror the pipeline stages; every report is JSON on stdout and
// embeds the manifest (command, inputs, seed, tolerances) so identical
// invocations serialize byte-identically. Failures print a JSON diagnostic on
// stderr and exit 1 (validation), 2 (numerical), or 3 (I/O).

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "forge/cubature.hpp"
#include "forge/dilation.hpp"
#include "forge/interp.hpp"
#include "forge/io.hpp"
#include "forge/naimark.hpp"
#include "forge/povm.hpp"
#include "forge/rng.hpp"
#include "forge/spectrum.hpp"

namespace {

using forge::io::Json;

struct CommonOpts {
    std::vector<std::string> inputs;
    std::optional<std::uint64_t> seed;
    std::string seed_source;  // "flag" or "env"
    std::string out;
    forge::ToleranceConfig tol;
};

void add_tolerance_flags(CLI::App* cmd, forge::ToleranceConfig& tol) {
    cmd->add_option("--tol-eig-floor", tol.eig_floor, "eigenvalue clamp floor");
    cmd->add_option("--tol-null-sigma", tol.null_sigma, "nullspace singular value cutoff");
    cmd->add_option("--tol-moment", tol.moment_tol, "moment matching tolerance");
    cmd->add_option("--tol-cluster", tol.cluster_tol, "spectral clustering tolerance");
    cmd->add_option("--tol-unitary", tol.unitary_tol, "isometry/normality tolerance");
}

void resolve_seed(CommonOpts& opts, bool required) {
    if (opts.seed) {
        opts.seed_source = "flag";
        return;
    }
    if (const char* env = std::getenv("DILATION_FORGE_SEED")) {
        opts.seed = std::strtoull(env, nullptr, 10);
        opts.seed_source = "env";
        return;
    }
    if (required)
        throw forge::SeedMissing(
            "this subcommand is randomized: pass --seed or set DILATION_FORGE_SEED");
}

Json manifest(const std::string& command, const CommonOpts& opts) {
    Json m;
    m["command"] = command;
    m["inputs"] = opts.inputs;
    if (opts.seed) {
        m["seed"] = *opts.seed;
        m["seed_source"] = opts.seed_source;
    } else {
        m["seed"] = nullptr;
    }
    Json t;
    t["eig_floor"] = opts.tol.eig_floor;
    t["null_sigma"] = opts.tol.null_sigma;
    t["moment_tol"] = opts.tol.moment_tol;
    t["cluster_tol"] = opts.tol.cluster_tol;
    t["unitary_tol"] = opts.tol.unitary_tol;
    m["tolerances"] = std::move(t);
    return m;
}

void emit(const Json& report, const std::string& out) {
    std::cout << report.dump(2) << "\n";
    if (!out.empty()) forge::io::save_json(report, out);
}

// Commutation gate for tuples arriving through files.
double commute_gate(const forge::ToleranceConfig& tol) { return tol.moment_tol; }

forge::MatrixTuple load_tuple(const std::string& path, const forge::ToleranceConfig& tol) {
    return forge::MatrixTuple::make(
        forge::io::tuple_matrices_from_json(forge::io::load_json(path)), commute_gate(tol));
}

forge::DiscretePOVM load_povm(const std::string& path) {
    return forge::io::povm_from_json(forge::io::load_json(path));
}

// ---- subcommands ----------------------------------------------------------

int run_spectrum(const CommonOpts& opts) {
    forge::MatrixTuple tuple = load_tuple(opts.inputs[0], opts.tol);
    forge::JointSpectrum js = forge::joint_spectrum(tuple, opts.tol, *opts.seed);

    Json report = manifest("spectrum", opts);
    report["n"] = tuple.n;
    report["d"] = tuple.d;
    report["commutation_residual"] = tuple.commutation_residual;
    Json pts = Json::array();
    for (const forge::Vector& p : js.points) pts.push_back(forge::io::point_to_json(p));
    report["points"] = std::move(pts);

    // Cross-check: the exactness test must fire on every spectrum point and
    // stay quiet on seeded probes away from it.
    Json rows = Json::array();
    bool all_on = true;
    for (const forge::Vector& p : js.points) {
        const bool singular = forge::koszul_is_singular(tuple, p, opts.tol);
        all_on = all_on && singular;
        Json row;
        row["point"] = forge::io::point_to_json(p);
        row["singular"] = singular;
        rows.push_back(std::move(row));
    }
    report["koszul_on_spectrum"] = std::move(rows);

    double radius = 1.0;
    for (const forge::Vector& p : js.points) radius = std::max(radius, p.norm());
    forge::Rng rng(forge::derive_seed(*opts.seed, 0x0ffULL));
    Json off = Json::array();
    int off_singular = 0;
    int made = 0;
    while (made < 20) {
        forge::Vector probe(tuple.n);
        for (int i = 0; i < tuple.n; ++i)
            probe(i) = forge::Complex(rng.uniform(-2.0 * radius, 2.0 * radius),
                                      rng.uniform(-2.0 * radius, 2.0 * radius));
        double dist = std::numeric_limits<double>::infinity();
        for (const forge::Vector& p : js.points) dist = std::min(dist, (probe - p).norm());
        if (dist < 1e-3) continue;
        ++made;
        const bool singular = forge::koszul_is_singular(tuple, probe, opts.tol);
        if (singular) ++off_singular;
        Json row;
        row["point"] = forge::io::point_to_json(probe);
        row["singular"] = singular;
        off.push_back(std::move(row));
    }
    report["koszul_off_probes"] = std::move(off);
    report["koszul_agrees"] = all_on && off_singular == 0;
    emit(report, opts.out);
    return 0;
}

int run_poisson(const CommonOpts& opts, int resolution) {
    forge::MatrixTuple tuple = load_tuple(opts.inputs[0], opts.tol);
    if (tuple.n != 1)
        throw forge::ValidationError("poisson: input must contain a single matrix");
    forge::DiscretePOVM povm = forge::poisson_povm(tuple.matrices[0], resolution, opts.tol);
    if (opts.out.empty()) throw forge::IoError("poisson: --out is required");
    forge::io::save_json(forge::io::povm_to_json(povm), opts.out);

    Json report = manifest("poisson", opts);
    report["resolution"] = resolution;
    report["atoms"] = static_cast<int>(povm.atoms.size());
    report["normalization_residual"] = povm.normalization_residual;
    report["output"] = opts.out;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_reduce(const CommonOpts& opts, int degree) {
    forge::DiscretePOVM povm = load_povm(opts.inputs[0]);
    const forge::MomentBasis basis = forge::MomentBasis::graded(povm.n, degree);
    forge::ReduceReport rr;
    forge::DiscretePOVM reduced = forge::reduce(povm, basis, opts.tol, &rr);
    if (opts.out.empty()) throw forge::IoError("reduce: --out is required");
    forge::io::save_json(forge::io::povm_to_json(reduced), opts.out);

    Json report = manifest("reduce", opts);
    report["degree"] = degree;
    report["atom_bound"] = rr.atom_bound;
    report["input_atoms"] = rr.input_atoms;
    report["output_atoms"] = rr.output_atoms;
    report["input_pieces"] = rr.input_pieces;
    report["iterations"] = rr.iterations;
    report["decompositions"] = rr.decompositions;
    report["max_moment_drift"] = rr.max_moment_drift;
    Json drift = Json::array();
    for (size_t a = 0; a < rr.per_monomial_drift.size(); ++a) {
        Json row;
        row["alpha"] = basis.exponents[a];
        row["drift"] = rr.per_monomial_drift[a];
        drift.push_back(std::move(row));
    }
    report["moment_drift"] = std::move(drift);
    report["output"] = opts.out;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_naimark(const CommonOpts& opts) {
    forge::DiscretePOVM povm = load_povm(opts.inputs[0]);
    forge::validate(povm, opts.tol);
    std::vector<forge::Matrix> weights;
    weights.reserve(povm.atoms.size());
    for (const forge::PovmAtom& a : povm.atoms) weights.push_back(a.weight);
    forge::NaimarkDilation nd = forge::naimark(weights, opts.tol);
    if (opts.out.empty()) throw forge::IoError("naimark: --out is required");
    forge::io::save_json(forge::io::naimark_to_json(nd), opts.out);

    const forge::Matrix gram =
        nd.V.adjoint() * nd.V - forge::Matrix::Identity(nd.d, nd.d);
    double reconstruction = 0.0;
    for (int j = 0; j < nd.M; ++j)
        reconstruction = std::max(
            reconstruction, forge::operator_norm(nd.compress(j) - weights[static_cast<size_t>(j)]));

    Json report = manifest("naimark", opts);
    report["M"] = nd.M;
    report["d"] = nd.d;
    report["D"] = nd.D();
    report["isometry_residual"] = forge::operator_norm(gram);
    report["reconstruction_residual"] = reconstruction;
    report["output"] = opts.out;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_dilate(const CommonOpts& opts, int degree) {
    forge::MatrixTuple tuple = load_tuple(opts.inputs[0], opts.tol);
    forge::DiscretePOVM povm = load_povm(opts.inputs[1]);
    forge::ReduceReport rr;
    forge::MDilation dil =
        forge::normal_m_dilation(tuple, povm, degree, opts.tol, *opts.seed, &rr);
    dil.source_povm_id = opts.inputs[1];
    if (opts.out.empty()) throw forge::IoError("dilate: --out is required");
    forge::io::save_json(forge::io::mdilation_to_json(dil), opts.out);

    forge::VerificationReport vr =
        forge::verify_m_dilation(tuple, dil, degree, opts.tol, *opts.seed);
    Json report = manifest("dilate", opts);
    report["degree"] = degree;
    report.update(forge::io::verification_to_json(vr));
    report["reduce_iterations"] = rr.iterations;
    report["reduce_atom_bound"] = rr.atom_bound;
    report["output"] = opts.out;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_verify(const CommonOpts& opts, int degree) {
    forge::MatrixTuple tuple = load_tuple(opts.inputs[0], opts.tol);
    forge::MDilation dil = forge::io::mdilation_from_json(forge::io::load_json(opts.inputs[1]),
                                                          commute_gate(opts.tol));
    forge::VerificationReport vr =
        forge::verify_m_dilation(tuple, dil, degree, opts.tol, *opts.seed);
    Json report = manifest("verify", opts);
    report["degree"] = degree;
    report.update(forge::io::verification_to_json(vr));
    emit(report, opts.out);
    return 0;
}

int run_hull(const CommonOpts& opts) {
    forge::FiniteXSet X = forge::io::finite_set_from_json(forge::io::load_json(opts.inputs[0]));
    const Json zj = forge::io::load_json(opts.inputs[1]);
    if (!zj.is_object() || !zj.contains("point")) throw forge::IoError("hull: z file needs point");
    forge::Vector z = forge::io::point_from_json(zj["point"]);
    forge::HullResult h = forge::finite_hull_membership(X, z, opts.tol);

    Json report = manifest("hull", opts);
    report["inside"] = h.inside;
    if (!h.inside) {
        Json factors = Json::array();
        for (const forge::CertificateFactor& f : h.certificate) {
            Json fj;
            fj["coordinate"] = f.coordinate;
            fj["root"] = forge::io::complex_to_json(f.root);
            factors.push_back(std::move(fj));
        }
        Json cert;
        cert["factors"] = std::move(factors);
        report["certificate"] = std::move(cert);
        report["value_at_z"] = h.value_at_z;
        report["max_over_set"] = h.max_over_set;
        report["margin"] = h.value_at_z - h.max_over_set;
    }
    emit(report, opts.out);
    return 0;
}

int run_toeplitz(const CommonOpts& opts) {
    const Json cj = forge::io::load_json(opts.inputs[0]);
    if (!cj.is_object() || !cj.contains("coeffs"))
        throw forge::IoError("toeplitz: file needs coeffs");
    std::vector<forge::Complex> coeffs;
    for (const Json& c : cj["coeffs"]) coeffs.push_back(forge::io::complex_from_json(c));
    forge::LowerToeplitz A = forge::LowerToeplitz::from_coeffs(coeffs);

    Json report = manifest("toeplitz", opts);
    report["d"] = A.d;
    report["norm"] = forge::operator_norm(A.materialize());
    report["contraction"] = forge::toeplitz_contraction_test(A, opts.tol.unitary_tol);
    emit(report, opts.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dilation-forge: finite-dimensional normal dilation pipeline"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        CommonOpts opts;
        int degree = 1;
        int resolution = 0;
        bool seed_required = false;
    };
    std::map<std::string, Sub> subs;

    auto make = [&](const std::string& name, const std::string& desc, int positionals,
                    bool seed_required) -> Sub& {
        Sub& s = subs[name];
        s.cmd = app.add_subcommand(name, desc);
        s.seed_required = seed_required;
        s.cmd->add_option("inputs", s.opts.inputs, "input files")->expected(positionals);
        s.cmd->add_option("--seed", s.opts.seed, "seed for randomized internals");
        s.cmd->add_option("--out", s.opts.out, "output file");
        add_tolerance_flags(s.cmd, s.opts.tol);
        return s;
    };

    make("spectrum", "joint spectrum with exactness cross-check", 1, true);
    Sub& poisson = make("poisson", "circle measure matching a strict contraction", 1, false);
    poisson.cmd->add_option("--resolution", poisson.resolution, "grid size")->required();
    Sub& reduce = make("reduce", "recombine a measure down to the atom bound", 1, false);
    reduce.cmd->add_option("--degree", reduce.degree, "moment degree")->required();
    make("naimark", "dilate a resolution of the identity to projections", 1, false);
    Sub& dilate = make("dilate", "build and verify a normal dilation", 2, true);
    dilate.cmd->add_option("--degree", dilate.degree, "moment degree")->required();
    Sub& verify = make("verify", "recheck a dilation against its tuple", 2, true);
    verify.cmd->add_option("--degree", verify.degree, "moment degree")->required();
    make("hull", "finite polynomial hull membership", 2, false);
    make("toeplitz", "lower Toeplitz contraction verdict", 1, false);

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, sub] : subs) {
            if (!sub.cmd->parsed()) continue;
            sub.opts.tol.require_positive();
            resolve_seed(sub.opts, sub.seed_required);
            if (name == "spectrum") return run_spectrum(sub.opts);
            if (name == "poisson") return run_poisson(sub.opts, sub.resolution);
            if (name == "reduce") return run_reduce(sub.opts, sub.degree);
            if (name == "naimark") return run_naimark(sub.opts);
            if (name == "dilate") return run_dilate(sub.opts, sub.degree);
            if (name == "verify") return run_verify(sub.opts, sub.degree);
            if (name == "hull") return run_hull(sub.opts);
            if (name == "toeplitz") return run_toeplitz(sub.opts);
        }
    } catch (const forge::IoError& e) {
        Json err{{"error", "io"}, {"what", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 3;
    } catch (const forge::NumericalError& e) {
        Json err{{"error", "numerical"}, {"what", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const forge::ValidationError& e) {
        Json err{{"error", "validation"}, {"what", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json err{{"error", "internal"}, {"what", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
    return 0;
}
