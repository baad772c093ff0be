#include "dephaselab/error.hpp"

namespace dephaselab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NormExceeded: return "NormExceeded";
    case ErrorCode::BadUnitVector: return "BadUnitVector";
    case ErrorCode::NonHermitianGenerator: return "NonHermitianGenerator";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::CouplingMismatch: return "CouplingMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dephaselab
