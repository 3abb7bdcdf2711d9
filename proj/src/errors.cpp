#include "qport/errors.hpp"

namespace qport {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::DuplicateControl: return "DuplicateControl";
    case ErrorCode::AlreadyMeasured: return "AlreadyMeasured";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::ZeroShots: return "ZeroShots";
    case ErrorCode::UnsupportedKernel: return "UnsupportedKernel";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonPositiveLevel: return "NonPositiveLevel";
    case ErrorCode::UnorderedDates: return "UnorderedDates";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace qport
