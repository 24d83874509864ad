#pragma once

#include "rbig/types.hpp"

#include <cstdint>

namespace rbig {

enum class RotationKind { PCA, RandomHaar };

const char* to_string(RotationKind kind);
RotationKind rotation_kind_from_string(const std::string& name);

/// Orthogonal D x D matrix. Orthogonality is checked at construction.
class RotationMatrix {
 public:
  RotationMatrix() = default;
  RotationMatrix(Eigen::MatrixXd entries, RotationKind kind,
                 bool rank_deficient = false);

  static RotationMatrix identity(int dim, RotationKind kind = RotationKind::PCA);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  RotationKind kind() const { return kind_; }
  /// PCA only: smallest covariance eigenvalue < 1e-12 * largest.
  bool rank_deficient() const { return rank_deficient_; }

 private:
  Eigen::MatrixXd entries_;
  RotationKind kind_ = RotationKind::PCA;
  bool rank_deficient_ = false;
};

/// Rows are unit eigenvectors of the sample covariance, descending eigenvalue,
/// sign fixed so the largest-magnitude entry of each row is positive.
RotationMatrix fit_pca_rotation(const SampleMatrix& data);

/// Haar-distributed orthogonal matrix from the sign-corrected QR factor of a
/// seeded Gaussian matrix.
RotationMatrix random_haar_rotation(int dim, std::uint64_t seed);

/// Maps every row x to R x, i.e. returns data * R^T.
template <typename Derived>
SampleMatrix rotate(const RotationMatrix& R, const Eigen::MatrixBase<Derived>& data) {
  if (data.cols() != R.dim())
    throw Error(ErrorKind::DimensionMismatch, "rotate: column count does not match rotation dim");
  return data * R.entries().transpose();
}

/// Maps every row y to R^T y.
template <typename Derived>
SampleMatrix rotate_inverse(const RotationMatrix& R, const Eigen::MatrixBase<Derived>& data) {
  if (data.cols() != R.dim())
    throw Error(ErrorKind::DimensionMismatch,
                "rotate_inverse: column count does not match rotation dim");
  return data * R.entries();
}

}  // namespace rbig
