#pragma once

#include "rbig/cube.hpp"

#include <cstdint>

namespace rbig::synth {

/// Zero-mean Gaussian rows with the given covariance (Cholesky of corr).
SampleMatrix gaussian(std::size_t n, const Eigen::MatrixXd& cov, std::uint64_t seed);
/// Unit-variance equicorrelated covariance.
Eigen::MatrixXd equicorrelation(int dim, double rho);
SampleMatrix uniform(std::size_t n, int dim, std::uint64_t seed, double lo = 0.0,
                     double hi = 1.0);
/// x ~ U(0, 2 pi), y = sin(x) + noise whose spread grows with x.
SampleMatrix heteroscedastic_sine(std::size_t n, std::uint64_t seed);
/// Two-component 2-D Gaussian mixture.
SampleMatrix gaussian_mixture(std::size_t n, std::uint64_t seed);
/// Unit-variance stationary AR(1) along time, independent across pixels.
DataCube ar1_cube(int T, int H, int W, double phi, std::uint64_t seed);

}  // namespace rbig::synth
