#include "rbig/measures.hpp"
#include "rbig/synth.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rbig;

namespace {

SampleMatrix pair(double rho, std::size_t n, std::uint64_t seed) {
  return synth::gaussian(n, synth::equicorrelation(2, rho), seed);
}

}  // namespace

TEST(TotalCorrelation, IndependentUniformIsZero) {
  const auto r = total_correlation(synth::uniform(100000, 4, 1));
  EXPECT_EQ(r.quantity, Quantity::TotalCorrelation);
  EXPECT_NEAR(r.value_bits, 0.0, 0.1);
  EXPECT_GE(r.value_bits, 0.0);
  EXPECT_EQ(r.dim, 4);
  EXPECT_EQ(r.n_samples, 100000u);
}

TEST(TotalCorrelation, GaussianClosedForms) {
  EXPECT_NEAR(total_correlation(pair(0.5, 50000, 2)).value_bits, oracle::gaussian_mi_bits(0.5), 0.05);
  const auto corr = synth::equicorrelation(4, 0.4);
  const double expected = oracle::gaussian_tc_bits(corr);
  EXPECT_NEAR(expected, 0.5367, 1e-4);
  EXPECT_NEAR(total_correlation(synth::gaussian(50000, corr, 3)).value_bits, expected, 0.15);
}

TEST(Entropy, ClosedForms) {
  const auto h3 = entropy(synth::gaussian(100000, Eigen::MatrixXd::Identity(3, 3), 4));
  EXPECT_NEAR(h3.value_bits, 3 * oracle::normal_entropy_bits(), 0.15);
  EXPECT_NEAR(per_feature(h3).value_bits, oracle::normal_entropy_bits(), 0.05);
  EXPECT_NEAR(entropy(synth::uniform(100000, 2, 5)).value_bits, 0.0, 0.1);
  EXPECT_NEAR(entropy(pair(0.9, 100000, 6)).value_bits,
              2 * oracle::normal_entropy_bits() - oracle::gaussian_mi_bits(0.9), 0.15);
}

TEST(Entropy, CanBeNegative) {
  const auto r = entropy(synth::uniform(20000, 2, 7, 0.0, 0.25));
  EXPECT_NEAR(r.value_bits, -4.0, 0.1);
  EXPECT_EQ(r.value_bits, r.raw_value_bits);
}

TEST(Entropy, RotationInvariance) {
  const auto x = synth::uniform(50000, 2, 8);
  Eigen::Matrix2d rot;
  const double a = 0.6;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const SampleMatrix y = x * rot.transpose();
  EXPECT_NEAR(entropy(x).value_bits, entropy(y).value_bits, 0.15);
}

TEST(MutualInformation, IndependentIsZero) {
  const auto x = synth::gaussian(20000, Eigen::MatrixXd::Identity(2, 2), 9);
  const auto y = synth::gaussian(20000, Eigen::MatrixXd::Identity(3, 3), 10);
  const auto r = mutual_information(x, y);
  EXPECT_EQ(r.quantity, Quantity::MutualInformation);
  EXPECT_NEAR(r.value_bits, 0.0, 0.1);
  EXPECT_EQ(r.dim, 5);
}

TEST(MutualInformation, GaussianPair) {
  const auto d = pair(0.9, 20000, 11);
  EXPECT_NEAR(mutual_information(d.col(0), d.col(1)).value_bits, oracle::gaussian_mi_bits(0.9), 0.1);
}

TEST(MutualInformation, SymmetricWithinNoise) {
  const auto d = pair(0.7, 20000, 12);
  EXPECT_NEAR(mutual_information(d.col(0), d.col(1)).value_bits,
              mutual_information(d.col(1), d.col(0)).value_bits, 0.05);
}

TEST(MutualInformation, IdenticalVariablesGrowWithSampleSize) {
  const auto small = synth::gaussian(2000, Eigen::MatrixXd::Identity(1, 1), 13);
  const auto big = synth::gaussian(20000, Eigen::MatrixXd::Identity(1, 1), 14);
  const double mi_small = mutual_information(small, small).value_bits;
  const double mi_big = mutual_information(big, big).value_bits;
  EXPECT_GT(mi_small, 3.0);
  EXPECT_GT(mi_big, mi_small);
}

TEST(MutualInformation, MonotoneInCoupling) {
  double prev = -1.0;
  for (double rho : {0.1, 0.5, 0.9}) {
    const auto d = pair(rho, 20000, 15);
    const double mi = mutual_information(d.col(0), d.col(1)).value_bits;
    EXPECT_GT(mi, prev) << "rho=" << rho;
    prev = mi;
  }
}

TEST(MutualInformation, InvariantUnderMonotoneReparameterization) {
  const auto d = pair(0.8, 100000, 16);
  const double base = mutual_information(d.col(0), d.col(1)).value_bits;
  const SampleMatrix cubed = d.col(0).array().cube().matrix();
  const SampleMatrix expd = d.col(1).array().exp().matrix();
  EXPECT_NEAR(mutual_information(cubed, d.col(1)).value_bits, base, 0.1);
  EXPECT_NEAR(mutual_information(d.col(0), expd).value_bits, base, 0.1);
}

TEST(MutualInformation, VennConsistency) {
  const auto d = pair(0.6, 100000, 17);
  const double mi = mutual_information(d.col(0), d.col(1)).value_bits;
  const double venn =
      entropy(d.col(0)).value_bits + entropy(d.col(1)).value_bits - entropy(d).value_bits;
  EXPECT_NEAR(mi, venn, 0.15);
}

TEST(MutualInformation, PairedLengthMismatch) {
  try {
    mutual_information(SampleMatrix::Random(100, 1), SampleMatrix::Random(99, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PairedLengthMismatch);
  }
}

TEST(ITReport, ClampsNegativesAndKeepsRaw) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = total_correlation(synth::gaussian(5000, Eigen::MatrixXd::Identity(3, 3), 100 + s));
    EXPECT_GE(r.value_bits, 0.0);
    EXPECT_GE(r.raw_value_bits, -2 * r.config.tol_delta_t);
    EXPECT_EQ(r.value_bits, std::max(0.0, r.raw_value_bits));
  }
}

TEST(ITReport, JsonFields) {
  const auto r = total_correlation(pair(0.5, 5000, 18));
  const auto j = to_json(r);
  for (const char* key : {"quantity", "value_bits", "raw_value_bits", "per_layer_delta_t", "n_samples",
                          "dim", "config"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["quantity"], "total_correlation");
  EXPECT_EQ(j["value_bits"].get<double>(), r.value_bits);
  EXPECT_EQ(j["per_layer_delta_t"].size(), r.per_layer_delta_t.size());
}

TEST(InformationMap, MatchesFlowInformation) {
  const auto d = pair(0.5, 5000, 19);
  const auto m = fit(d);
  EXPECT_EQ(information_map(m, d), information(m, d));
}
