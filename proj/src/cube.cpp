#include "rbig/cube.hpp"

#include <algorithm>
#include <cmath>

namespace rbig {

DataCube::DataCube(int T, int H, int W, std::vector<double> values, std::optional<GridMeta> meta)
    : T_(T), H_(H), W_(W), values_(std::move(values)), meta_(meta) {
  if (T < 1 || H < 1 || W < 1)
    throw Error(ErrorKind::InvalidArgument, "cube dimensions must be >= 1");
  if (values_.size() != static_cast<std::size_t>(T) * H * W)
    throw Error(ErrorKind::DimensionMismatch, "cube value count does not match T*H*W");
  if (std::none_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorKind::NonFiniteInput, "cube holds no finite value");
}

double PatchConfig::ratio() const {
  if (dim() == 1) return 0.0;
  return std::log(static_cast<double>(temporal)) / std::log(static_cast<double>(dim()));
}

PatchSet extract_patches(const DataCube& cube, const PatchConfig& cfg) {
  const int s = cfg.spatial, tau = cfg.temporal;
  if (s < 1 || tau < 1 || cfg.stride_space < 1 || cfg.stride_time < 1)
    throw Error(ErrorKind::InvalidArgument, "patch sizes and strides must be >= 1");
  if (s > std::min(cube.H(), cube.W()) || tau > cube.T())
    throw Error(ErrorKind::PatchLargerThanCube,
                "patch " + std::to_string(s) + "x" + std::to_string(s) + "x" + std::to_string(tau) +
                    " does not fit cube " + std::to_string(cube.T()) + "x" +
                    std::to_string(cube.H()) + "x" + std::to_string(cube.W()));

  PatchSet out;
  out.grid_t = (cube.T() - tau) / cfg.stride_time + 1;
  out.grid_r = (cube.H() - s) / cfg.stride_space + 1;
  out.grid_c = (cube.W() - s) / cfg.stride_space + 1;
  const int dim = cfg.dim();

  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(out.grid_t) * out.grid_r * out.grid_c * dim);
  std::vector<double> patch(dim);
  for (int gt = 0; gt < out.grid_t; ++gt) {
    for (int gr = 0; gr < out.grid_r; ++gr) {
      for (int gc = 0; gc < out.grid_c; ++gc) {
        const Anchor a{gt * cfg.stride_time, gr * cfg.stride_space, gc * cfg.stride_space};
        bool complete = true;
        for (int dt = 0; dt < tau; ++dt)
          for (int dr = 0; dr < s; ++dr)
            for (int dc = 0; dc < s; ++dc) {
              const double v = cube.at(a.t + dt, a.r + dr, a.c + dc);
              complete = complete && std::isfinite(v);
              patch[patch_column(cfg, dt, dr, dc)] = v;
            }
        if (!complete && cfg.drop_incomplete) continue;
        rows.insert(rows.end(), patch.begin(), patch.end());
        out.anchors.push_back(a);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(out.anchors.size());
  out.samples = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      rows.data(), n, dim);
  return out;
}

int patch_column(const PatchConfig& cfg, int dt, int dr, int dc) {
  return (dt * cfg.spatial + dr) * cfg.spatial + dc;
}

std::vector<PatchConfig> ratio_sweep_configs(int budget, int n_ratios, int T, int H, int W) {
  if (budget < 4) throw Error(ErrorKind::InvalidArgument, "budget must be >= 4");
  if (n_ratios < 2) throw Error(ErrorKind::InvalidArgument, "n_ratios must be >= 2");
  if (T < 1 || H < 1 || W < 1) throw Error(ErrorKind::InvalidArgument, "cube shape must be >= 1");

  const auto within = [budget](int dim) {
    return std::abs(dim - budget) <= 0.2 * budget + 1e-9;
  };

  // One candidate per spatial size: the temporal depth bringing s^2 tau closest to budget.
  std::vector<PatchConfig> candidates;
  const int s_max = std::min(H, W);
  for (int s = 1; s <= s_max && s * s <= 1.2 * budget; ++s) {
    int best_tau = 0;
    for (int tau = 1; tau <= T; ++tau) {
      const int dim = s * s * tau;
      if (!within(dim)) continue;
      if (best_tau == 0 || std::abs(dim - budget) < std::abs(s * s * best_tau - budget))
        best_tau = tau;
    }
    if (best_tau > 0) candidates.push_back({s, best_tau, 1, 1, true});
  }
  // Purely spatial endpoint: among tau = 1 configs keep only the one closest to budget.
  const auto spatial_end = std::min_element(
      candidates.begin(), candidates.end(), [budget](const PatchConfig& a, const PatchConfig& b) {
        if ((a.temporal == 1) != (b.temporal == 1)) return a.temporal == 1;
        return std::abs(a.dim() - budget) < std::abs(b.dim() - budget);
      });
  const bool has_spatial = spatial_end != candidates.end() && spatial_end->temporal == 1;
  const bool has_temporal = !candidates.empty() && candidates.front().spatial == 1;
  if (!has_spatial || !has_temporal)
    throw Error(ErrorKind::InfeasibleBudget,
                "no " + std::string(has_spatial ? "purely temporal" : "purely spatial") +
                    " configuration within 20% of budget " + std::to_string(budget));
  const PatchConfig spatial = *spatial_end;
  std::erase_if(candidates, [&](const PatchConfig& c) {
    return c.temporal == 1 && c.spatial != spatial.spatial;
  });
  std::sort(candidates.begin(), candidates.end(),
            [](const PatchConfig& a, const PatchConfig& b) { return a.ratio() < b.ratio(); });

  if (static_cast<int>(candidates.size()) <= n_ratios) return candidates;

  std::vector<bool> taken(candidates.size(), false);
  taken.front() = taken.back() = true;
  for (int i = 1; i + 1 < n_ratios; ++i) {
    const double target = static_cast<double>(i) / (n_ratios - 1);
    std::size_t best = candidates.size();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (taken[k]) continue;
      if (best == candidates.size() ||
          std::abs(candidates[k].ratio() - target) < std::abs(candidates[best].ratio() - target))
        best = k;
    }
    taken[best] = true;
  }
  std::vector<PatchConfig> out;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (taken[k]) out.push_back(candidates[k]);
  return out;
}

SampleMatrix lag_embed(const SampleMatrix& series, int lags) {
  if (lags < 1) throw Error(ErrorKind::InvalidArgument, "lags must be >= 1");
  const Eigen::Index n = series.rows();
  if (n <= lags)
    throw Error(ErrorKind::SeriesTooShort,
                "series of length " + std::to_string(n) + " too short for " + std::to_string(lags) +
                    " lags");
  const Eigen::Index rows = n - lags + 1;
  SampleMatrix out(rows, series.cols() * lags);
  for (Eigen::Index v = 0; v < series.cols(); ++v)
    for (int k = 0; k < lags; ++k)
      out.col(v * lags + k) = series.col(v).segment(lags - 1 - k, rows);
  return out;
}

}  // namespace rbig
