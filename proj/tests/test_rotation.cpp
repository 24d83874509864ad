#include "rbig/rotation.hpp"
#include "rbig/synth.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rbig;

namespace {

void expect_orthogonal(const RotationMatrix& R) {
  const auto& Q = R.entries();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(R.dim(), R.dim());
  EXPECT_LE((Q.transpose() * Q - I).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(std::abs(Q.determinant()), 1.0, 1e-8);
}

Eigen::MatrixXd planar(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

TEST(PcaRotation, PrincipalAxisOfDiagonalCovariance) {
  Eigen::MatrixXd cov = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  const auto R = fit_pca_rotation(synth::gaussian(100000, cov, 1));
  expect_orthogonal(R);
  EXPECT_NEAR(std::abs(R.entries()(0, 0)), 1.0, 0.02);
  EXPECT_NEAR(std::abs(R.entries()(0, 1)), 0.0, 0.02);
  EXPECT_EQ(R.kind(), RotationKind::PCA);
  EXPECT_FALSE(R.rank_deficient());
}

TEST(PcaRotation, WhiteDataGivesSomeOrthogonalMatrix) {
  expect_orthogonal(fit_pca_rotation(synth::gaussian(20000, Eigen::MatrixXd::Identity(3, 3), 2)));
}

TEST(PcaRotation, RotatedCovarianceRecoversDiagonalDirection) {
  Eigen::MatrixXd cov = Eigen::Vector2d(9.0, 1.0).asDiagonal();
  const Eigen::MatrixXd rot = planar(M_PI / 4);
  const SampleMatrix data = synth::gaussian(50000, cov, 3) * rot.transpose();
  const auto R = fit_pca_rotation(data);
  const Eigen::Vector2d v = R.entries().row(0).transpose();
  const double cosang = std::abs(v.dot(Eigen::Vector2d(1, 1).normalized()));
  EXPECT_LE(std::acos(std::min(1.0, cosang)) * 180.0 / M_PI, 2.0);
}

TEST(PcaRotation, SignConventionAndOrdering) {
  Eigen::MatrixXd cov(3, 3);
  cov << 3.0, 0.5, 0.1, 0.5, 2.0, 0.2, 0.1, 0.2, 1.0;
  const SampleMatrix data = synth::gaussian(20000, cov, 4);
  const auto R = fit_pca_rotation(data);
  for (int i = 0; i < 3; ++i) {
    Eigen::Index arg;
    R.entries().row(i).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(R.entries()(i, arg), 0.0);
  }
  const SampleMatrix y = rotate(R, data);
  const Eigen::RowVectorXd var =
      (y.rowwise() - y.colwise().mean()).colwise().squaredNorm() / (y.rows() - 1.0);
  EXPECT_GT(var[0], var[1]);
  EXPECT_GT(var[1], var[2]);
}

TEST(PcaRotation, DecorrelatesTrainingData) {
  Eigen::MatrixXd cov = synth::equicorrelation(4, 0.6);
  const SampleMatrix data = synth::gaussian(100000, cov, 5);
  const SampleMatrix y = rotate(fit_pca_rotation(data), data);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      EXPECT_LE(std::abs(oracle::correlation(y.col(a), y.col(b))), 0.02);
}

TEST(PcaRotation, DeterministicAndFlagsRankDeficiency) {
  const SampleMatrix data = synth::gaussian(5000, synth::equicorrelation(3, 0.3), 6);
  EXPECT_EQ(fit_pca_rotation(data).entries(), fit_pca_rotation(data).entries());

  SampleMatrix dup(5000, 2);
  dup.col(0) = data.col(0);
  dup.col(1) = data.col(0);
  const auto R = fit_pca_rotation(dup);
  expect_orthogonal(R);
  EXPECT_TRUE(R.rank_deficient());
}

TEST(PcaRotation, RejectsTooFewRows) {
  EXPECT_THROW(fit_pca_rotation(SampleMatrix::Random(3, 3)), Error);
}

TEST(HaarRotation, OneDimensional) {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const auto R = random_haar_rotation(1, seed);
    EXPECT_EQ(std::abs(R.entries()(0, 0)), 1.0);
  }
}

TEST(HaarRotation, SeedDeterminism) {
  const auto a = random_haar_rotation(5, 42);
  const auto b = random_haar_rotation(5, 42);
  EXPECT_EQ(a.entries(), b.entries());
  EXPECT_NE(a.entries(), random_haar_rotation(5, 43).entries());
  expect_orthogonal(a);
  EXPECT_EQ(a.kind(), RotationKind::RandomHaar);
}

TEST(HaarRotation, EntriesHaveZeroMeanAndUnitColumnEnergy) {
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(3, 3);
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    const auto R = random_haar_rotation(3, s);
    const auto& q = R.entries();
    mean += q;
    second += q.cwiseAbs2();
  }
  mean /= seeds;
  second /= seeds;
  EXPECT_LE(mean.cwiseAbs().maxCoeff(), 0.02);
  // Under Haar measure every entry has E[q^2] = 1/d.
  EXPECT_LE((second.array() - 1.0 / 3.0).abs().maxCoeff(), 0.02);
}

TEST(Rotate, IdentityLeavesDataUnchanged) {
  const SampleMatrix data = SampleMatrix::Random(50, 4);
  EXPECT_EQ(rotate(RotationMatrix::identity(4), data), data);
}

TEST(Rotate, RoundTripAndNormPreservation) {
  const SampleMatrix data = synth::gaussian(1000, synth::equicorrelation(6, 0.2), 7);
  const auto R = random_haar_rotation(6, 8);
  const SampleMatrix y = rotate(R, data);
  EXPECT_LE((rotate_inverse(R, y) - data).cwiseAbs().maxCoeff(), 1e-12);
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    ASSERT_NEAR(y.row(i).norm(), data.row(i).norm(), 1e-10 * data.row(i).norm());
}

TEST(Rotate, QuarterTurnAndPermutation) {
  const RotationMatrix R(planar(M_PI / 2), RotationKind::RandomHaar);
  SampleMatrix e1(1, 2);
  e1 << 1.0, 0.0;
  const SampleMatrix y = rotate(R, e1);
  EXPECT_NEAR(y(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(y(0, 1), 1.0, 1e-15);

  Eigen::MatrixXd perm(3, 3);
  perm << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const RotationMatrix P(perm, RotationKind::RandomHaar);
  SampleMatrix x(1, 3);
  x << 1.0, 2.0, 3.0;
  const SampleMatrix px = rotate(P, x);
  EXPECT_EQ(px(0, 0), 2.0);
  EXPECT_EQ(px(0, 2), 1.0);
  EXPECT_EQ(rotate_inverse(P, px), x);
}

TEST(Rotate, DimensionMismatch) {
  const auto R = RotationMatrix::identity(3);
  try {
    rotate(R, SampleMatrix::Zero(4, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  EXPECT_THROW(rotate_inverse(R, SampleMatrix::Zero(4, 5)), Error);
}

TEST(RotationMatrix, RejectsNonOrthogonal) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = 1e-6;
  EXPECT_THROW(RotationMatrix(m, RotationKind::PCA), Error);
}
