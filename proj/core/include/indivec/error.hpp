#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace indivec {

enum class ErrorCode {
    InvalidArgument,
    EmptyVotes,
    ProviderError,
    AuthError,
    DimensionMismatch,
    ZeroVector,
    DuplicateId,
    EmptyStore,
    FormatError,
    IoError,
    ParseEmpty,
    SchemaError,
    LabelMapError,
    IdMismatch,
    SizeTooLarge,
    PredictionFailed,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyVotes: return "EmptyVotes";
        case ErrorCode::ProviderError: return "ProviderError";
        case ErrorCode::AuthError: return "AuthError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::EmptyStore: return "EmptyStore";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ParseEmpty: return "ParseEmpty";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::LabelMapError: return "LabelMapError";
        case ErrorCode::IdMismatch: return "IdMismatch";
        case ErrorCode::SizeTooLarge: return "SizeTooLarge";
        case ErrorCode::PredictionFailed: return "PredictionFailed";
    }
    return "UnknownError";
}

/// Single exception type for the whole library; the code tells callers
/// which contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error("[" + std::string(to_string(code)) + "] " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace indivec
