#pragma once

#include "rbig/types.hpp"

#include <optional>
#include <vector>

namespace rbig {

struct GridMeta {
  double lat0 = 0.0, lon0 = 0.0;
  double dlat = 0.0, dlon = 0.0;
  double dt_days = 0.0;
};

/// One variable on a (time, row, col) grid, row-major with time slowest.
/// Missing values are NaN.
class DataCube {
 public:
  DataCube() = default;
  DataCube(int T, int H, int W, std::vector<double> values,
           std::optional<GridMeta> meta = std::nullopt);

  int T() const { return T_; }
  int H() const { return H_; }
  int W() const { return W_; }
  double at(int t, int r, int c) const {
    return values_[(static_cast<std::size_t>(t) * H_ + r) * W_ + c];
  }
  const std::vector<double>& values() const { return values_; }
  const std::optional<GridMeta>& meta() const { return meta_; }

 private:
  int T_ = 0, H_ = 0, W_ = 0;
  std::vector<double> values_;
  std::optional<GridMeta> meta_;
};

struct PatchConfig {
  int spatial = 1;
  int temporal = 1;
  int stride_space = 1;
  int stride_time = 1;
  bool drop_incomplete = true;

  int dim() const { return spatial * spatial * temporal; }
  /// log(tau) / log(s^2 tau): 0 for purely spatial, 1 for purely temporal.
  double ratio() const;
};

struct Anchor {
  int t, r, c;
};

struct PatchSet {
  SampleMatrix samples;        ///< one flattened patch per row
  std::vector<Anchor> anchors; ///< top-left-earliest corner of each kept patch
  int grid_t = 0, grid_r = 0, grid_c = 0;  ///< anchor grid before dropping
};

/// Patches are flattened time-major, then row, then column:
///   column = (dt * s + dr) * s + dc.
PatchSet extract_patches(const DataCube& cube, const PatchConfig& cfg);

/// Column of cell (dt, dr, dc), offsets from the patch anchor.
int patch_column(const PatchConfig& cfg, int dt, int dr, int dc);

/// Configurations with s^2 * tau within 20% of budget, one per spatial size,
/// ordered by ratio from 0 to 1. Both endpoints are always returned; interior
/// picks are the candidates nearest to evenly spaced target ratios.
std::vector<PatchConfig> ratio_sweep_configs(int budget, int n_ratios, int T, int H, int W);

/// Row i = (x_i, x_{i-1}, ..., x_{i-k+1}) for each column; a multi-column
/// series yields k columns per variable, variable-major.
SampleMatrix lag_embed(const SampleMatrix& series, int lags);

}  // namespace rbig
