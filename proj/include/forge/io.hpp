#pragma once

#include <string>
#include <vector>

#include "forge/dilation.hpp"
#include "forge/naimark.hpp"
#include "forge/povm.hpp"
#include "forge/spectrum.hpp"
#include "forge/types.hpp"

// vendor/json.hpp defines nlohmann::json; files and reports use the
// order-preserving flavor so identical runs serialize byte-identically.
#include <json.hpp>

namespace forge::io {

using Json = nlohmann::ordered_json;

// Complex scalars serialize as [re, im]; matrices row-major; points as
// arrays of [re, im]. No string-encoded numbers anywhere.
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json point_to_json(const Vector& z);
Vector point_from_json(const Json& j);

// { "n": int, "d": int, "atoms": [ { "point": ..., "weight": ... } ] }
Json povm_to_json(const DiscretePOVM& povm);
DiscretePOVM povm_from_json(const Json& j);

// { "n": int, "d": int, "matrices": [ ... ] }
Json tuple_to_json(const MatrixTuple& tuple);
std::vector<Matrix> tuple_matrices_from_json(const Json& j);

Json naimark_to_json(const NaimarkDilation& nd);
NaimarkDilation naimark_from_json(const Json& j);

Json mdilation_to_json(const MDilation& dil);
MDilation mdilation_from_json(const Json& j, double commute_tol);

Json finite_set_to_json(const FiniteXSet& X);
FiniteXSet finite_set_from_json(const Json& j);

Json verification_to_json(const VerificationReport& report);

/// Parse a file into JSON; IoError on missing file or malformed content.
Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

}  // namespace forge::io
