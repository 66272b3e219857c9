#include "forge/io.hpp"

#include <fstream>

namespace forge::io {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw IoError("json: " + what);
}

double number_at(const Json& j) {
    require(j.is_number(), "expected a number");
    return j.get<double>();
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    require(j.is_array() && j.size() == 2, "complex scalar must be [re, im]");
    return {number_at(j[0]), number_at(j[1])};
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    require(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
    const size_t rows = j.size();
    require(j[0].is_array() && !j[0].empty(), "matrix rows must be non-empty arrays");
    const size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i) {
        require(j[i].is_array() && j[i].size() == cols, "ragged matrix rows");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[i][c]);
    }
    if (!is_finite(m)) throw ValidationError("matrix contains non-finite entries");
    return m;
}

Json point_to_json(const Vector& z) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < z.size(); ++i) arr.push_back(complex_to_json(z(i)));
    return arr;
}

Vector point_from_json(const Json& j) {
    require(j.is_array() && !j.empty(), "point must be a non-empty array");
    Vector z(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) z(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return z;
}

Json povm_to_json(const DiscretePOVM& povm) {
    Json j;
    j["n"] = povm.n;
    j["d"] = povm.d;
    Json atoms = Json::array();
    for (const PovmAtom& a : povm.atoms) {
        Json atom;
        atom["point"] = point_to_json(a.point);
        atom["weight"] = matrix_to_json(a.weight);
        atoms.push_back(std::move(atom));
    }
    j["atoms"] = std::move(atoms);
    return j;
}

DiscretePOVM povm_from_json(const Json& j) {
    require(j.is_object() && j.contains("n") && j.contains("d") && j.contains("atoms"),
            "POVM file needs n, d, atoms");
    DiscretePOVM povm;
    povm.n = j["n"].get<int>();
    povm.d = j["d"].get<int>();
    require(povm.n >= 1 && povm.d >= 1, "POVM dimensions must be positive");
    require(j["atoms"].is_array() && !j["atoms"].empty(), "POVM needs at least one atom");
    for (const Json& aj : j["atoms"]) {
        require(aj.contains("point") && aj.contains("weight"), "atom needs point and weight");
        PovmAtom atom;
        atom.point = point_from_json(aj["point"]);
        atom.weight = matrix_from_json(aj["weight"]);
        require(atom.point.size() == povm.n, "atom point has wrong dimension");
        require(atom.weight.rows() == povm.d && atom.weight.cols() == povm.d,
                "atom weight has wrong shape");
        povm.atoms.push_back(std::move(atom));
    }
    return povm;
}

Json tuple_to_json(const MatrixTuple& tuple) {
    Json j;
    j["n"] = tuple.n;
    j["d"] = tuple.d;
    Json mats = Json::array();
    for (const Matrix& m : tuple.matrices) mats.push_back(matrix_to_json(m));
    j["matrices"] = std::move(mats);
    return j;
}

std::vector<Matrix> tuple_matrices_from_json(const Json& j) {
    require(j.is_object() && j.contains("matrices"), "tuple file needs matrices");
    require(j["matrices"].is_array() && !j["matrices"].empty(), "tuple needs at least one matrix");
    std::vector<Matrix> mats;
    for (const Json& mj : j["matrices"]) mats.push_back(matrix_from_json(mj));
    if (j.contains("n"))
        require(j["n"].get<int>() == static_cast<int>(mats.size()), "tuple n mismatch");
    if (j.contains("d"))
        require(j["d"].get<int>() == static_cast<int>(mats[0].rows()), "tuple d mismatch");
    return mats;
}

Json naimark_to_json(const NaimarkDilation& nd) {
    Json j;
    j["d"] = nd.d;
    j["M"] = nd.M;
    j["D"] = nd.D();
    j["V"] = matrix_to_json(nd.V);
    // The projections are coordinate blocks of the stacked space; offsets
    // determine them completely.
    j["projection_form"] = "coordinate_blocks";
    Json blocks = Json::array();
    for (int b = 0; b < nd.M; ++b) {
        Json block;
        block["offset"] = b * nd.d;
        block["dim"] = nd.d;
        blocks.push_back(std::move(block));
    }
    j["projections"] = std::move(blocks);
    return j;
}

NaimarkDilation naimark_from_json(const Json& j) {
    require(j.is_object() && j.contains("V") && j.contains("M") && j.contains("d"),
            "dilation file needs V, M, d");
    NaimarkDilation nd;
    nd.M = j["M"].get<int>();
    nd.d = j["d"].get<int>();
    nd.V = matrix_from_json(j["V"]);
    require(nd.V.rows() == static_cast<Eigen::Index>(nd.M) * nd.d && nd.V.cols() == nd.d,
            "dilation V has wrong shape");
    return nd;
}

Json mdilation_to_json(const MDilation& dil) {
    Json j;
    j["n"] = dil.tuple_N.n;
    j["d"] = static_cast<int>(dil.V.cols());
    j["D"] = dil.tuple_N.d;
    j["m"] = dil.m;
    j["V"] = matrix_to_json(dil.V);
    Json mats = Json::array();
    for (const Matrix& m : dil.tuple_N.matrices) mats.push_back(matrix_to_json(m));
    j["matrices"] = std::move(mats);
    Json support = Json::array();
    for (const Vector& w : dil.support) support.push_back(point_to_json(w));
    j["support"] = std::move(support);
    j["source_povm"] = dil.source_povm_id;
    return j;
}

MDilation mdilation_from_json(const Json& j, double commute_tol) {
    require(j.is_object() && j.contains("matrices") && j.contains("V") && j.contains("m") &&
                j.contains("support"),
            "dilation file needs matrices, V, m, support");
    MDilation dil;
    std::vector<Matrix> mats;
    for (const Json& mj : j["matrices"]) mats.push_back(matrix_from_json(mj));
    dil.tuple_N = MatrixTuple::make(std::move(mats), commute_tol);
    dil.V = matrix_from_json(j["V"]);
    dil.m = j["m"].get<int>();
    for (const Json& pj : j["support"]) dil.support.push_back(point_from_json(pj));
    if (j.contains("source_povm") && j["source_povm"].is_string())
        dil.source_povm_id = j["source_povm"].get<std::string>();
    return dil;
}

Json finite_set_to_json(const FiniteXSet& X) {
    Json j;
    j["n"] = X.n;
    Json pts = Json::array();
    for (const Vector& p : X.points) pts.push_back(point_to_json(p));
    j["points"] = std::move(pts);
    return j;
}

FiniteXSet finite_set_from_json(const Json& j) {
    require(j.is_object() && j.contains("points"), "set file needs points");
    require(j["points"].is_array() && !j["points"].empty(), "set needs at least one point");
    FiniteXSet X;
    for (const Json& pj : j["points"]) X.points.push_back(point_from_json(pj));
    X.n = static_cast<int>(X.points[0].size());
    for (const Vector& p : X.points)
        require(static_cast<int>(p.size()) == X.n, "set points have mixed dimensions");
    if (j.contains("n")) require(j["n"].get<int>() == X.n, "set n mismatch");
    return X;
}

Json verification_to_json(const VerificationReport& report) {
    Json j;
    j["max_residual"] = report.max_residual;
    Json rows = Json::array();
    for (const VerificationRow& row : report.rows) {
        Json r;
        r["alpha"] = row.alpha;
        r["residual"] = row.residual;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["normality"] = report.normality;
    j["atoms"] = report.atoms;
    j["dimension"] = report.dimension;
    j["isometry_residual"] = report.isometry_residual;
    j["support_contained"] = report.support_contained;
    j["support_distance"] = report.support_distance;
    return j;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace forge::io
