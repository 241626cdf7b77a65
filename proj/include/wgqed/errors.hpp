// errors.hpp: Error codes and the exception type thrown across the library

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgqed {

enum class ErrorCode {
    InvalidConfig,
    DimensionMismatch,
    NonDissipativeReservoir,
    NegativeRate,
    ConvergenceFailure,
    NoBracket,
    OnRealAxis,
    PoleOnGrid,
    Defective,
    SingularSystem,
    NotABoundState,
    ZeroOnContour,
    RefinementCap,
    PoleHit,
    QuadratureFailure,
    ParseError,
    ValidationError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonDissipativeReservoir: return "NonDissipativeReservoir";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::OnRealAxis: return "OnRealAxis";
    case ErrorCode::PoleOnGrid: return "PoleOnGrid";
    case ErrorCode::Defective: return "Defective";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotABoundState: return "NotABoundState";
    case ErrorCode::ZeroOnContour: return "ZeroOnContour";
    case ErrorCode::RefinementCap: return "RefinementCap";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace wgqed
