#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qport {

enum class ErrorCode {
    // circuit
    IndexOutOfRange,
    ArityMismatch,
    DuplicateControl,
    AlreadyMeasured,
    // statevec
    CapacityExceeded,
    ZeroShots,
    UnsupportedKernel,
    // distributions / covariance
    DegenerateVariance,
    NonSymmetric,
    NotPSD,
    SingularCovariance,
    // data loading
    ParseError,
    NonPositiveLevel,
    UnorderedDates,
    TooShort,
    TooFewRows,
    // model / portfolio
    DimensionMismatch,
    BadWeights,
    EmptyPath,
    LengthMismatch,
    IoError,
};

std::string_view error_code_name(ErrorCode code);

/// Validation and usage errors thrown across the library. what() is
/// "<CodeName>: <message>"; the CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace qport
