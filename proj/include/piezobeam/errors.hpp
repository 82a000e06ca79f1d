#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace piezobeam {

enum class ErrorCode {
    NonPositiveParameter,
    InvalidGeometry,
    MissingPatchMaterial,
    IllegalRegime,
    FieldShapeMismatch,
    OutOfDomain,
    TooFewElements,
    MeshSpecMismatch,
    UnknownBc,
    SingularElectricBlock,
    NotPositiveDefinite,
    ConvergenceFailure,
    SingularStepMatrix,
    InsufficientMeshes,
    ParseError,
    UnknownKey,
    UnitViolation,
};

std::string_view to_string(ErrorCode code);

/// Numerical failures map to exit code 3 in the CLI, input problems to 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct Violation {
    ErrorCode code;
    std::string message;
};

/// Thrown by validate_spec; carries every violation found, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

}  // namespace piezobeam
