#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

// Base of all library errors. The three direct subclasses map onto the CLI
// exit codes: ValidationError -> 1, NumericalError -> 2, IoError -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct DimensionError : ValidationError {
    using ValidationError::ValidationError;
};

struct NotPSD : ValidationError {
    using ValidationError::ValidationError;
};

struct NotNormalized : ValidationError {
    using ValidationError::ValidationError;
};

struct NotCommuting : ValidationError {
    using ValidationError::ValidationError;
};

struct NotNormal : ValidationError {
    using ValidationError::ValidationError;
};

struct NotIsometry : ValidationError {
    using ValidationError::ValidationError;
};

struct NotContraction : ValidationError {
    using ValidationError::ValidationError;
};

struct NotStrictContraction : ValidationError {
    using ValidationError::ValidationError;
};

struct ConstantMissing : ValidationError {
    using ValidationError::ValidationError;
};

struct DegenerateCertificate : ValidationError {
    using ValidationError::ValidationError;
};

struct SeedMissing : ValidationError {
    using ValidationError::ValidationError;
};

struct TriangularizationFailed : NumericalError {
    using NumericalError::NumericalError;
};

// Carries the worst offending multi-index so reports can point at it.
struct MomentMismatch : NumericalError {
    MomentMismatch(const std::string& what, std::vector<int> alpha, double residual)
        : NumericalError(what), worst_alpha(std::move(alpha)), worst_residual(residual) {}
    std::vector<int> worst_alpha;
    double worst_residual = 0.0;
};

}  // namespace forge
