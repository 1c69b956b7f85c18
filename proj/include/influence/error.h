#ifndef INFLUENCE_ERROR_H_
#define INFLUENCE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace influence {

enum class ErrorCode {
  kInvalidArgument,
  kEmptySpec,
  kDuplicateName,
  kDuplicateLabel,
  kEmptyStates,
  kSpaceTooLarge,
  kInvalidProfile,
  kConflictingLabel,
  kMixedValueKinds,
  kEmptyDataset,
  kCapExceeded,
  kNonBijective,
  kNonBinary,
  kPartialDataset,
  kInvalidState,
  kNegativeWeight,
  kMissingWeight,
  kDimensionMismatch,
  kIncompatibleDistance,
  kInvalidDistanceTable,
  kZeroVector,
  kUnsupportedSignPattern,
  kUnknownState,
  kUnknownFeature,
  kUnknownItem,
  kNonNumeric,
  kNegativeCount,
  kMalformedRow,
  kEmptyInput,
  kNothingToAnalyze,
  kEmptyList,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library. Input problems and precondition
// violations share this type; the code tells them apart.
class InfluenceError : public std::runtime_error {
 public:
  InfluenceError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace influence

#endif  // INFLUENCE_ERROR_H_
