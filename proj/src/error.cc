#include "influence/error.h"

namespace influence {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptySpec: return "EmptySpec";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kEmptyStates: return "EmptyStates";
    case ErrorCode::kSpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::kInvalidProfile: return "InvalidProfile";
    case ErrorCode::kConflictingLabel: return "ConflictingLabel";
    case ErrorCode::kMixedValueKinds: return "MixedValueKinds";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kNonBijective: return "NonBijective";
    case ErrorCode::kNonBinary: return "NonBinary";
    case ErrorCode::kPartialDataset: return "PartialDataset";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kMissingWeight: return "MissingWeight";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kIncompatibleDistance: return "IncompatibleDistance";
    case ErrorCode::kInvalidDistanceTable: return "InvalidDistanceTable";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kUnsupportedSignPattern: return "UnsupportedSignPattern";
    case ErrorCode::kUnknownState: return "UnknownState";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kUnknownItem: return "UnknownItem";
    case ErrorCode::kNonNumeric: return "NonNumeric";
    case ErrorCode::kNegativeCount: return "NegativeCount";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNothingToAnalyze: return "NothingToAnalyze";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace influence
