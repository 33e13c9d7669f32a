#include "icedrift/error.hpp"

namespace icedrift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::PoleDegenerate: return "PoleDegenerate";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace icedrift
