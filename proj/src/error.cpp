#include "wgqed/error.hpp"

namespace wgqed {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::EmptyManifold: return "empty-manifold";
    case ErrorCode::NonFiniteEntry: return "non-finite-entry";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::NonUnitaryMatrix: return "non-unitary-matrix";
    case ErrorCode::NonDegenerateExcitedManifold: return "non-degenerate-excited-manifold";
    case ErrorCode::InvalidEnvironment: return "invalid-environment";
    case ErrorCode::NonPassiveLoss: return "non-passive-loss";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::SingularResponseMatrix: return "singular-response-matrix";
    case ErrorCode::SingularDenominator: return "singular-denominator";
    case ErrorCode::ToleranceNotMet: return "tolerance-not-met";
    case ErrorCode::NonPhysicalState: return "non-physical-state";
    case ErrorCode::UnknownPreset: return "unknown-preset";
    case ErrorCode::ConfigError: return "config-error";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

} // namespace wgqed
