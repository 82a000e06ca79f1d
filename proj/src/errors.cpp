#include "piezobeam/errors.hpp"

namespace piezobeam {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
        case ErrorCode::InvalidGeometry: return "InvalidGeometry";
        case ErrorCode::MissingPatchMaterial: return "MissingPatchMaterial";
        case ErrorCode::IllegalRegime: return "IllegalRegime";
        case ErrorCode::FieldShapeMismatch: return "FieldShapeMismatch";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::TooFewElements: return "TooFewElements";
        case ErrorCode::MeshSpecMismatch: return "MeshSpecMismatch";
        case ErrorCode::UnknownBc: return "UnknownBc";
        case ErrorCode::SingularElectricBlock: return "SingularElectricBlock";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::SingularStepMatrix: return "SingularStepMatrix";
        case ErrorCode::InsufficientMeshes: return "InsufficientMeshes";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::UnitViolation: return "UnitViolation";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularElectricBlock:
        case ErrorCode::NotPositiveDefinite:
        case ErrorCode::ConvergenceFailure:
        case ErrorCode::SingularStepMatrix:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += std::string(to_string(v.code)) + " (" + v.message + ")";
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::InvalidGeometry : violations.front().code,
            join_violations(violations)),
      violations_(std::move(violations)) {}

}  // namespace piezobeam
