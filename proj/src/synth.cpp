#include "rbig/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rbig::synth {

SampleMatrix gaussian(std::size_t n, const Eigen::MatrixXd& cov, std::uint64_t seed) {
  if (cov.rows() != cov.cols() || cov.rows() < 1)
    throw Error(ErrorKind::InvalidArgument, "covariance must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidArgument, "covariance is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleMatrix z(static_cast<Eigen::Index>(n), cov.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index d = 0; d < z.cols(); ++d) z(i, d) = normal(rng);
  return z * L.transpose();
}

Eigen::MatrixXd equicorrelation(int dim, double rho) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(dim, dim, rho);
  c.diagonal().setOnes();
  return c;
}

SampleMatrix uniform(std::size_t n, int dim, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  SampleMatrix x(static_cast<Eigen::Index>(n), dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index d = 0; d < x.cols(); ++d) x(i, d) = u(rng);
  return x;
}

SampleMatrix heteroscedastic_sine(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleMatrix x(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double t = u(rng);
    const double sd = 0.05 + 0.25 * t / (2.0 * std::numbers::pi);
    x(i, 0) = t;
    x(i, 1) = std::sin(t) + sd * normal(rng);
  }
  return x;
}

SampleMatrix gaussian_mixture(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution pick(0.4);
  SampleMatrix x(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double a = normal(rng), b = normal(rng);
    if (pick(rng)) {
      x(i, 0) = -2.0 + 0.6 * a;
      x(i, 1) = 1.0 + 0.6 * (0.5 * a + std::sqrt(0.75) * b);
    } else {
      x(i, 0) = 1.5 + 1.0 * a;
      x(i, 1) = -0.5 + 0.5 * b;
    }
  }
  return x;
}

DataCube ar1_cube(int T, int H, int W, double phi, std::uint64_t seed) {
  if (!(std::abs(phi) < 1.0)) throw Error(ErrorKind::InvalidArgument, "AR(1) needs |phi| < 1");
  if (T < 1 || H < 1 || W < 1) throw Error(ErrorKind::InvalidArgument, "cube dims must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double innovation = std::sqrt(1.0 - phi * phi);
  std::vector<double> values(static_cast<std::size_t>(T) * H * W);
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (std::size_t px = 0; px < plane; ++px) {
    double x = normal(rng);
    values[px] = x;
    for (int t = 1; t < T; ++t) {
      x = phi * x + innovation * normal(rng);
      values[t * plane + px] = x;
    }
  }
  return DataCube(T, H, W, std::move(values));
}

}  // namespace rbig::synth
