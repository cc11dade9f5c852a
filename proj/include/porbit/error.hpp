#pragma once

#include <stdexcept>
#include <string>

namespace porbit {

// Error taxonomy. "Internal" codes signal broken invariants (a bug in this
// library, not bad input) and map to a distinct process exit code in the CLI.
enum class ErrorCode {
    // input / domain errors
    DegenerateMap,
    NotNormalized,
    NotFixed,
    MultiplierNotIntegral,
    SingularMobius,
    DivisionByZero,
    NonIntegralArgument,
    ParseError,
    PreperiodicOrbit,
    // resource / inconclusive
    SizeLimit,
    TruncationOverflow,
    PrecisionLoss,
    PrecisionExhausted,
    NoPrimeFound,
    NoCommonPrime,
    PoleCollision,
    DecayFailure,
    InconclusiveBranch,
    // internal invariant violations
    SharedFactor,
    IndeterminatePoint,
    IndeterminateOrbit,
    IdentityViolation,
    CertificateInvalid,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DegenerateMap: return "DegenerateMap";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NotFixed: return "NotFixed";
        case ErrorCode::MultiplierNotIntegral: return "MultiplierNotIntegral";
        case ErrorCode::SingularMobius: return "SingularMobius";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::NonIntegralArgument: return "NonIntegralArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::PreperiodicOrbit: return "PreperiodicOrbit";
        case ErrorCode::SizeLimit: return "SizeLimit";
        case ErrorCode::TruncationOverflow: return "TruncationOverflow";
        case ErrorCode::PrecisionLoss: return "PrecisionLoss";
        case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorCode::NoPrimeFound: return "NoPrimeFound";
        case ErrorCode::NoCommonPrime: return "NoCommonPrime";
        case ErrorCode::PoleCollision: return "PoleCollision";
        case ErrorCode::DecayFailure: return "DecayFailure";
        case ErrorCode::InconclusiveBranch: return "InconclusiveBranch";
        case ErrorCode::SharedFactor: return "SharedFactor";
        case ErrorCode::IndeterminatePoint: return "IndeterminatePoint";
        case ErrorCode::IndeterminateOrbit: return "IndeterminateOrbit";
        case ErrorCode::IdentityViolation: return "IdentityViolation";
        case ErrorCode::CertificateInvalid: return "CertificateInvalid";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

inline bool error_is_internal(ErrorCode c) {
    switch (c) {
        case ErrorCode::SharedFactor:
        case ErrorCode::IndeterminatePoint:
        case ErrorCode::IndeterminateOrbit:
        case ErrorCode::IdentityViolation:
        case ErrorCode::CertificateInvalid:
        case ErrorCode::Internal:
            return true;
        default:
            return false;
    }
}

inline bool error_is_inconclusive(ErrorCode c) {
    switch (c) {
        case ErrorCode::SizeLimit:
        case ErrorCode::TruncationOverflow:
        case ErrorCode::PrecisionLoss:
        case ErrorCode::PrecisionExhausted:
        case ErrorCode::NoPrimeFound:
        case ErrorCode::NoCommonPrime:
        case ErrorCode::PoleCollision:
        case ErrorCode::DecayFailure:
        case ErrorCode::InconclusiveBranch:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace porbit
