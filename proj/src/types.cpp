#include "rbig/types.hpp"

#include <cmath>

namespace rbig {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateDimension: return "DegenerateDimension";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::PairedLengthMismatch: return "PairedLengthMismatch";
    case ErrorKind::PatchLargerThanCube: return "PatchLargerThanCube";
    case ErrorKind::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

void require_finite(const SampleMatrix& data) {
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (!data.col(j).allFinite())
      throw Error(ErrorKind::NonFiniteInput,
                  "non-finite value in column " + std::to_string(j), static_cast<int>(j));
  }
}

}  // namespace rbig
