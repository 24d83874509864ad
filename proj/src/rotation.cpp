#include "rbig/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace rbig {

const char* to_string(RotationKind kind) {
  return kind == RotationKind::PCA ? "pca" : "random";
}

RotationKind rotation_kind_from_string(const std::string& name) {
  if (name == "pca") return RotationKind::PCA;
  if (name == "random") return RotationKind::RandomHaar;
  throw Error(ErrorKind::InvalidArgument, "unknown rotation kind '" + name + "'");
}

RotationMatrix::RotationMatrix(Eigen::MatrixXd entries, RotationKind kind, bool rank_deficient)
    : entries_(std::move(entries)), kind_(kind), rank_deficient_(rank_deficient) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
    throw Error(ErrorKind::DimensionMismatch, "rotation must be square and non-empty");
  if (!entries_.allFinite()) throw Error(ErrorKind::NonFiniteInput, "rotation has non-finite entries");
  const Eigen::MatrixXd gram = entries_.transpose() * entries_;
  const double err = (gram - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (err > 1e-10)
    throw Error(ErrorKind::Format, "rotation not orthogonal (max |R^T R - I| = " +
                                       std::to_string(err) + ")");
}

RotationMatrix RotationMatrix::identity(int dim, RotationKind kind) {
  return RotationMatrix(Eigen::MatrixXd::Identity(dim, dim), kind);
}

RotationMatrix fit_pca_rotation(const SampleMatrix& data) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (d < 1) throw Error(ErrorKind::DimensionMismatch, "PCA needs at least one column");
  if (n <= d) throw Error(ErrorKind::InsufficientSamples, "PCA needs more rows than columns");
  require_finite(data);

  const SampleMatrix centered = data.rowwise() - data.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = 0.5 * (cov + cov.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidArgument, "covariance eigendecomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();

  std::vector<Eigen::Index> lead(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::Index arg = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
    lead[k] = arg;
  }

  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return lead[a] < lead[b];
  });

  Eigen::MatrixXd rows(d, d);
  for (Eigen::Index i = 0; i < d; ++i) rows.row(i) = vectors.col(order[i]).transpose();

  const double largest = values.maxCoeff();
  const bool deficient = values.minCoeff() < 1e-12 * largest;
  return RotationMatrix(std::move(rows), RotationKind::PCA, deficient);
}

RotationMatrix random_haar_rotation(int dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "rotation dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return RotationMatrix(std::move(q), RotationKind::RandomHaar);
}

}  // namespace rbig
