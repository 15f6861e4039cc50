#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robagg {

enum class ErrorCode {
    AllZero,
    NegativeMass,
    NotADistribution,
    DimensionMismatch,
    WeightSumError,
    RhoOutOfRange,
    DomainError,
    EmptyList,
    InvalidArgument,
    SolverDiverged,
    NoConvergence,
    EmptyIntersection,
    BracketFailure,
    UnknownAct,
    UnknownOutcome,
    AbsoluteContinuityFailure,
    NoFosdOrder,
    NonConcaveDetected,
    NoRoot,
    InconsistentInputs,
    TargetOutOfRange,
    TooFewSignals,
    SchemaError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WeightSumError: return "WeightSumError";
    case ErrorCode::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::UnknownAct: return "UnknownAct";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::AbsoluteContinuityFailure: return "AbsoluteContinuityFailure";
    case ErrorCode::NoFosdOrder: return "NoFosdOrder";
    case ErrorCode::NonConcaveDetected: return "NonConcaveDetected";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::InconsistentInputs: return "InconsistentInputs";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::TooFewSignals: return "TooFewSignals";
    case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) fail(code, what);
}

} // namespace robagg
