#include "rbig/flow.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rbig {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::span<const double> column(const SampleMatrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

void check_columns(const SampleMatrix& data, int dim, const char* what) {
  if (data.cols() != dim)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(dim) + " columns, got " +
                    std::to_string(data.cols()));
}

double column_range(const SampleMatrix& m, Eigen::Index j) {
  return m.col(j).maxCoeff() - m.col(j).minCoeff();
}

}  // namespace

void FitConfig::validate() const {
  if (bins < 0 || bins == 1) throw Error(ErrorKind::InvalidArgument, "bins must be >= 2 or 0 (auto)");
  if (!(tail_fraction >= 0.0) || !std::isfinite(tail_fraction))
    throw Error(ErrorKind::InvalidArgument, "tail_fraction must be >= 0");
  if (clamp_eps != 0.0 && !(clamp_eps > 0.0 && clamp_eps < 0.5))
    throw Error(ErrorKind::InvalidArgument, "clamp_eps must lie in (0, 0.5) or be 0 (auto)");
  if (!(tol_delta_t > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol_delta_t must be > 0");
  if (patience < 1) throw Error(ErrorKind::InvalidArgument, "patience must be >= 1");
  if (max_layers < patience)
    throw Error(ErrorKind::InvalidArgument, "max_layers must be >= patience");
}

std::vector<double> GaussModel::delta_t_trace() const {
  std::vector<double> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back(l.delta_t);
  return out;
}

std::vector<double> GaussModel::non_gaussianity_trace() const {
  std::vector<double> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back(l.non_gaussianity);
  return out;
}

GaussModel fit(const SampleMatrix& data, const FitConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(data.rows());
  const int dim = static_cast<int>(data.cols());
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "fit: data has no columns");
  if (n < 10) throw Error(ErrorKind::InsufficientSamples, "fit: need at least 10 rows");
  if (static_cast<int>(n) <= dim)
    throw Error(ErrorKind::InsufficientSamples, "fit: need more rows than columns");
  require_finite(data);

  GaussModel model;
  model.dim = dim;
  model.n_train = n;
  model.config = config;
  if (model.config.bins == 0) model.config.bins = default_bins(n);
  if (model.config.clamp_eps == 0.0) model.config.clamp_eps = default_clamp_eps(n);
  const FitConfig& cfg = model.config;

  for (int d = 0; d < dim; ++d) {
    if (!(column_range(data, d) > 0.0))
      throw Error(ErrorKind::DegenerateDimension,
                  "column " + std::to_string(d) + " is constant", d);
    model.marginal_entropies_input.push_back(marginal_entropy(column(data, d), cfg.bins));
  }

  SampleMatrix x = data;
  SampleMatrix psi(x.rows(), x.cols());
  int quiet = 0;
  for (int l = 0; l < cfg.max_layers; ++l) {
    GaussLayer layer;
    layer.gaussianizers.reserve(dim);
    for (int d = 0; d < dim; ++d) {
      auto g = MarginalGaussianizer::fit(column(x, d), cfg.bins, cfg.tail_fraction, cfg.clamp_eps);
      for (Eigen::Index i = 0; i < x.rows(); ++i) psi(i, d) = g.forward(x(i, d)).z;
      layer.gaussianizers.push_back(std::move(g));
    }

    layer.rotation = cfg.rotation_kind == RotationKind::PCA
                         ? fit_pca_rotation(psi)
                         : random_haar_rotation(dim, splitmix64(cfg.seed + static_cast<std::uint64_t>(l)));
    x = rotate(layer.rotation, psi);

    // Marginal Gaussianization leaves T unchanged and the rotation leaves the
    // joint entropy unchanged, so this layer removes D*H(N) - sum_d H(y_d).
    double max_range = 0.0;
    for (int d = 0; d < dim; ++d) max_range = std::max(max_range, column_range(x, d));
    const double resolution = max_range / static_cast<double>(n);
    double delta_t = 0.0;
    double non_gauss = 0.0;
    for (int d = 0; d < dim; ++d) {
      double h;
      if (column_range(x, d) <= 1e-9 * max_range) {
        // Collapsed direction: bound its entropy by one resolution cell.
        model.degenerate = true;
        h = std::log2(resolution);
      } else {
        h = marginal_entropy(column(x, d), cfg.bins);
        non_gauss += marginal_non_gaussianity(column(x, d), cfg.bins);
      }
      delta_t += kStdNormalEntropyBits - h;
    }
    layer.delta_t = delta_t;
    layer.non_gaussianity = non_gauss;
    model.total_correlation += delta_t;
    model.layers.push_back(std::move(layer));

    if (model.degenerate) break;
    quiet = delta_t < cfg.tol_delta_t ? quiet + 1 : 0;
    if (quiet >= cfg.patience) {
      model.converged = true;
      break;
    }
  }
  return model;
}

Transformed transform_layer(const GaussLayer& layer, const SampleMatrix& data) {
  check_columns(data, layer.dim(), "transform");
  SampleMatrix psi(data.rows(), data.cols());
  Vector logjac = Vector::Zero(data.rows());
  for (Eigen::Index d = 0; d < data.cols(); ++d) {
    const auto& g = layer.gaussianizers[d];
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const auto f = g.forward(data(i, d));
      psi(i, d) = f.z;
      logjac[i] += f.logjac;
    }
  }
  return {rotate(layer.rotation, psi), std::move(logjac)};
}

Transformed transform(const GaussModel& model, const SampleMatrix& data) {
  check_columns(data, model.dim, "transform");
  require_finite(data);
  Transformed out{data, Vector::Zero(data.rows())};
  for (const auto& layer : model.layers) {
    auto step = transform_layer(layer, out.z);
    out.z = std::move(step.z);
    out.logjac += step.logjac;
  }
  return out;
}

SampleMatrix inverse(const GaussModel& model, const SampleMatrix& z) {
  check_columns(z, model.dim, "inverse");
  require_finite(z);
  SampleMatrix x = z;
  for (auto it = model.layers.rbegin(); it != model.layers.rend(); ++it) {
    x = rotate_inverse(it->rotation, x);
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
      const auto& g = it->gaussianizers[d];
      for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, d) = g.inverse(x(i, d));
    }
  }
  return x;
}

Vector log_density(const GaussModel& model, const SampleMatrix& x) {
  const auto t = transform(model, x);
  constexpr double kLog2Pi = 1.83787706640934548356;
  const double base = -0.5 * model.dim * kLog2Pi;
  Vector out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    out[i] = (base - 0.5 * t.z.row(i).squaredNorm() + t.logjac[i]) / kLn2;
  return out;
}

Vector information(const GaussModel& model, const SampleMatrix& x) {
  return -log_density(model, x);
}

SampleMatrix sample(const GaussModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleMatrix z(static_cast<Eigen::Index>(n), model.dim);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index d = 0; d < z.cols(); ++d) z(i, d) = normal(rng);
  return inverse(model, z);
}

}  // namespace rbig
