#pragma once

#include "rbig/marginal.hpp"
#include "rbig/rotation.hpp"

#include <cstdint>
#include <vector>

namespace rbig {

struct FitConfig {
  RotationKind rotation_kind = RotationKind::PCA;
  int bins = 0;               ///< 0 selects default_bins(N)
  double tail_fraction = 0.1;
  double clamp_eps = 0.0;     ///< 0 selects default_clamp_eps(N)
  int max_layers = 100;
  double tol_delta_t = 0.01;  ///< bits
  int patience = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One Gaussianization block: marginal Gaussianization then rotation.
struct GaussLayer {
  std::vector<MarginalGaussianizer> gaussianizers;
  RotationMatrix rotation;
  double delta_t = 0.0;           ///< total-correlation reduction, bits
  double non_gaussianity = 0.0;   ///< sum of marginal KL to N(0,1) after rotation, bits

  int dim() const { return rotation.dim(); }
};

struct GaussModel {
  int dim = 0;
  std::vector<GaussLayer> layers;
  double total_correlation = 0.0;            ///< sum of layer delta_t, bits
  std::vector<double> marginal_entropies_input;  ///< bits, raw input dims
  FitConfig config;                          ///< with Auto values resolved
  std::size_t n_train = 0;
  bool converged = false;
  /// A rotated dimension collapsed to (numerically) zero spread; fitting stopped there.
  bool degenerate = false;

  std::vector<double> delta_t_trace() const;
  std::vector<double> non_gaussianity_trace() const;
};

/// Gaussianized samples and the per-row natural-log Jacobian determinant.
struct Transformed {
  SampleMatrix z;
  Vector logjac;
};

GaussModel fit(const SampleMatrix& data, const FitConfig& config = {});

/// Applies one layer; logjac receives this layer's contribution.
Transformed transform_layer(const GaussLayer& layer, const SampleMatrix& data);
Transformed transform(const GaussModel& model, const SampleMatrix& data);
SampleMatrix inverse(const GaussModel& model, const SampleMatrix& z);

/// log2 p(x) per row via change of variables.
Vector log_density(const GaussModel& model, const SampleMatrix& x);
/// Shannon information -log2 p(x) per row.
Vector information(const GaussModel& model, const SampleMatrix& x);

/// n rows drawn from N(0, I) in row order from one seeded stream, then inverted.
SampleMatrix sample(const GaussModel& model, std::size_t n, std::uint64_t seed);

inline std::vector<double> non_gaussianity_trace(const GaussModel& model) {
  return model.non_gaussianity_trace();
}

}  // namespace rbig
