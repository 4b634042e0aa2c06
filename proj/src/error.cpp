#include "sybil/error.hpp"

namespace sybil {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::NegativeWealth: return "NegativeWealth";
    case ErrorCode::NonFiniteWealth: return "NonFiniteWealth";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidSplitCount: return "InvalidSplitCount";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::NotProgressive: return "NotProgressive";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroTotalWealth: return "ZeroTotalWealth";
    case ErrorCode::ZeroEntryForNonpositiveC: return "ZeroEntryForNonpositiveC";
    case ErrorCode::ZeroEntryForMeasure: return "ZeroEntryForMeasure";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnknownMeasureId: return "UnknownMeasureId";
    case ErrorCode::InfeasibleFamily: return "InfeasibleFamily";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidReport: return "InvalidReport";
  }
  return "Unknown";
}

}  // namespace sybil
