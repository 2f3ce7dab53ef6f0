#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwlab {

enum class ErrorCode {
    InvalidArgument,
    NonUnitMass,
    NonzeroMean,
    Reducible,
    SupportTooWide,
    ParseError,
    WindowOverflow,
    SingularSystem,
    QuadratureNotConverged,
    OutOfWindow,
    InconsistentEstimates,
    DeficitTooLarge,
    TailNotNegligible,
    MissingKernel,
    ConstraintViolation,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonUnitMass: return "NonUnitMass";
    case ErrorCode::NonzeroMean: return "NonzeroMean";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::SupportTooWide: return "SupportTooWide";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::WindowOverflow: return "WindowOverflow";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::InconsistentEstimates: return "InconsistentEstimates";
    case ErrorCode::DeficitTooLarge: return "DeficitTooLarge";
    case ErrorCode::TailNotNegligible: return "TailNotNegligible";
    case ErrorCode::MissingKernel: return "MissingKernel";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace rwlab
