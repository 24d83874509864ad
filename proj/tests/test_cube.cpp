#include "rbig/cube.hpp"
#include "rbig/measures.hpp"
#include "rbig/synth.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace rbig;

namespace {

DataCube ramp(int T, int H, int W) {
  std::vector<double> v(static_cast<std::size_t>(T) * H * W);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  return DataCube(T, H, W, std::move(v));
}

bool has_config(const std::vector<PatchConfig>& cs, int s, int tau) {
  for (const auto& c : cs)
    if (c.spatial == s && c.temporal == tau) return true;
  return false;
}

}  // namespace

TEST(ExtractPatches, FullySpatialAndFullyTemporal) {
  const auto cube = ramp(46, 7, 7);
  const auto spatial = extract_patches(cube, {7, 1, 1, 1, true});
  EXPECT_EQ(spatial.samples.rows(), 46);
  EXPECT_EQ(spatial.samples.cols(), 49);
  const auto temporal = extract_patches(cube, {1, 46, 1, 1, true});
  EXPECT_EQ(temporal.samples.rows(), 49);
  EXPECT_EQ(temporal.samples.cols(), 46);
}

TEST(ExtractPatches, DropsIncompletePatches) {
  std::vector<double> v(3 * 4 * 5, 1.0);
  v[0] = std::nan("");
  const DataCube cube(3, 4, 5, v);
  EXPECT_EQ(extract_patches(cube, {1, 1, 1, 1, true}).samples.rows(), 3 * 4 * 5 - 1);
  const auto kept = extract_patches(cube, {1, 1, 1, 1, false});
  EXPECT_EQ(kept.samples.rows(), 3 * 4 * 5);
  EXPECT_TRUE(std::isnan(kept.samples(0, 0)));
}

TEST(ExtractPatches, CountFormulaWithStrides) {
  const auto cube = ramp(11, 9, 8);
  for (int s : {1, 2, 3})
    for (int tau : {1, 2, 4})
      for (int ss : {1, 2})
        for (int st : {1, 3}) {
          const PatchConfig cfg{s, tau, ss, st, true};
          const auto ps = extract_patches(cube, cfg);
          const int expected =
              ((11 - tau) / st + 1) * ((9 - s) / ss + 1) * ((8 - s) / ss + 1);
          ASSERT_EQ(ps.samples.rows(), expected);
          ASSERT_EQ(static_cast<int>(ps.anchors.size()), expected);
          ASSERT_EQ(ps.grid_t * ps.grid_r * ps.grid_c, expected);
        }
}

TEST(ExtractPatches, FlatteningIsTimeMajorAndLossless) {
  const auto cube = ramp(6, 5, 7);
  const PatchConfig cfg{2, 3, 1, 2, true};
  const auto ps = extract_patches(cube, cfg);
  std::vector<double> rebuilt(cube.values().size(), std::nan(""));
  for (std::size_t i = 0; i < ps.anchors.size(); ++i) {
    const auto a = ps.anchors[i];
    for (int dt = 0; dt < 3; ++dt)
      for (int dr = 0; dr < 2; ++dr)
        for (int dc = 0; dc < 2; ++dc) {
          const double v = ps.samples(static_cast<Eigen::Index>(i), patch_column(cfg, dt, dr, dc));
          ASSERT_EQ(v, cube.at(a.t + dt, a.r + dr, a.c + dc));
          rebuilt[(static_cast<std::size_t>(a.t + dt) * 5 + a.r + dr) * 7 + a.c + dc] = v;
        }
  }
  for (std::size_t i = 0; i < rebuilt.size(); ++i)
    if (!std::isnan(rebuilt[i])) ASSERT_EQ(rebuilt[i], cube.values()[i]);
  // Column 1 is the next column in the same row and time step.
  EXPECT_EQ(ps.samples(0, 1) - ps.samples(0, 0), 1.0);
  EXPECT_EQ(ps.samples(0, 4) - ps.samples(0, 0), 5.0 * 7.0);
}

TEST(ExtractPatches, PatchLargerThanCube) {
  const auto cube = ramp(4, 3, 3);
  try {
    extract_patches(cube, {4, 1, 1, 1, true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PatchLargerThanCube);
  }
  EXPECT_THROW(extract_patches(cube, {1, 5, 1, 1, true}), Error);
}

TEST(RatioSweep, BudgetFortyNineEndpoints) {
  const auto cs = ratio_sweep_configs(49, 5, 46, 64, 64);
  ASSERT_GE(cs.size(), 2u);
  EXPECT_EQ(cs.front().spatial, 7);
  EXPECT_EQ(cs.front().temporal, 1);
  EXPECT_EQ(cs.back().spatial, 1);
  EXPECT_EQ(cs.back().temporal, 46);
  EXPECT_EQ(cs.front().ratio(), 0.0);
  EXPECT_DOUBLE_EQ(cs.back().ratio(), 1.0);
}

TEST(RatioSweep, BudgetFortyEightHasMixedConfig) {
  const auto cs = ratio_sweep_configs(48, 5, 46, 64, 64);
  EXPECT_TRUE(has_config(cs, 4, 3));
  for (std::size_t i = 1; i < cs.size(); ++i) EXPECT_GT(cs[i].ratio(), cs[i - 1].ratio());
  for (const auto& c : cs) {
    EXPECT_LE(std::abs(c.dim() - 48), 0.2 * 48);
    EXPECT_LE(c.temporal, 46);
  }
}

TEST(RatioSweep, TwoRatiosAreTheEndpoints) {
  const auto cs = ratio_sweep_configs(48, 2, 46, 64, 64);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].temporal, 1);
  EXPECT_EQ(cs[1].spatial, 1);
}

TEST(RatioSweep, Infeasible) {
  // Only 3 time steps: no purely temporal config near 49.
  try {
    ratio_sweep_configs(49, 3, 3, 64, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfeasibleBudget);
  }
  EXPECT_THROW(ratio_sweep_configs(49, 3, 64, 2, 2), Error);
}

TEST(LagEmbed, SmallSeries) {
  SampleMatrix s(4, 1);
  s << 1, 2, 3, 4;
  const auto e = lag_embed(s, 2);
  SampleMatrix expected(3, 2);
  expected << 2, 1, 3, 2, 4, 3;
  EXPECT_EQ(e, expected);
  EXPECT_EQ(lag_embed(s, 1), s);
  try {
    lag_embed(s, 4);
    FAIL();
  } catch (const Error& e2) {
    EXPECT_EQ(e2.kind(), ErrorKind::SeriesTooShort);
  }
}

TEST(LagEmbed, IndependentSeriesHasNoRedundancy) {
  const auto series = synth::gaussian(60000, Eigen::MatrixXd::Identity(1, 1), 1);
  const double raw = entropy(series).value_bits;
  const double embedded = per_feature(entropy(lag_embed(series, 3))).value_bits;
  EXPECT_NEAR(embedded, raw, 0.1);
}

TEST(Ar1Cube, TemporalEndpointCarriesLessEntropyPerFeature) {
  const double phi = 0.9;
  const auto cube = synth::ar1_cube(400, 12, 12, phi, 2);
  const auto cs = ratio_sweep_configs(9, 2, cube.T(), cube.H(), cube.W());
  ASSERT_EQ(cs.size(), 2u);
  const auto spatial = extract_patches(cube, cs.front());
  const auto temporal = extract_patches(cube, cs.back());
  const double h_spatial = per_feature(entropy(spatial.samples)).value_bits;
  const double h_temporal = per_feature(entropy(temporal.samples)).value_bits;
  const int tau = cs.back().temporal;
  EXPECT_NEAR(h_spatial, oracle::normal_entropy_bits(), 0.1);
  EXPECT_NEAR(h_temporal, oracle::ar1_block_entropy_bits(phi, tau) / tau, 0.2);
  EXPECT_LT(h_temporal, h_spatial - 0.3);
}
