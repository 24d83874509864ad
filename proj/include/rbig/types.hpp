#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rbig {

/// Rows are observations, columns are dimensions.
using SampleMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Natural-log to bits.
inline constexpr double kLn2 = 0.693147180559945309417;
/// Differential entropy of N(0,1) in bits: 0.5 * log2(2 pi e).
inline constexpr double kStdNormalEntropyBits = 2.0471975511965976;

enum class ErrorKind {
  DegenerateDimension,
  NonFiniteInput,
  ProbabilityOutOfRange,
  DimensionMismatch,
  InsufficientSamples,
  PairedLengthMismatch,
  PatchLargerThanCube,
  InfeasibleBudget,
  SeriesTooShort,
  InvalidArgument,
  Io,
  Format,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, int dimension = -1)
      : std::runtime_error(what), kind_(kind), dimension_(dimension) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending column for per-dimension errors, -1 otherwise.
  int dimension() const noexcept { return dimension_; }

 private:
  ErrorKind kind_;
  int dimension_;
};

/// Throws NonFiniteInput naming the first column holding NaN or Inf.
void require_finite(const SampleMatrix& data);

}  // namespace rbig
