#pragma once

#include "rbig/types.hpp"

#include <span>
#include <vector>

namespace rbig {

/// Standard normal CDF.
double normal_cdf(double z);
/// Standard normal log-density.
double normal_log_pdf(double z);

/// Inverse standard normal CDF. Rational initial guess refined by one Newton
/// step; evaluated on min(p, 1 - p) and mirrored so the result is odd about 0.5.
double probit(double p);

/// round(sqrt(n)), at least 2.
int default_bins(std::size_t n);
/// 1/(2n), at least 1e-7.
double default_clamp_eps(std::size_t n);

/// Piecewise-linear empirical CDF built from a histogram, extended on both
/// sides of the observed range so out-of-sample points keep a finite slope.
class MarginalUniformizer {
 public:
  struct Forward {
    double p;
    double logdpdx;
  };

  MarginalUniformizer() = default;
  /// Validates the knot invariants; used by fit() and by model loading.
  MarginalUniformizer(std::vector<double> knots_x, std::vector<double> knots_p,
                      double clamp_eps);

  static MarginalUniformizer fit(std::span<const double> x, int bins,
                                 double tail_fraction, double clamp_eps);

  Forward forward(double x) const;
  double inverse(double p) const;

  double support_lo() const { return knots_x_.front(); }
  double support_hi() const { return knots_x_.back(); }
  double clamp_eps() const { return clamp_eps_; }
  const std::vector<double>& knots_x() const { return knots_x_; }
  const std::vector<double>& knots_p() const { return knots_p_; }

 private:
  std::vector<double> knots_x_;
  std::vector<double> knots_p_;
  double clamp_eps_ = 1e-7;
};

/// probit composed with a uniformizer.
class MarginalGaussianizer {
 public:
  struct Forward {
    double z;
    double logjac;  ///< natural log of dz/dx
  };

  MarginalGaussianizer() = default;
  explicit MarginalGaussianizer(MarginalUniformizer u) : u_(std::move(u)) {}

  static MarginalGaussianizer fit(std::span<const double> x, int bins,
                                  double tail_fraction, double clamp_eps) {
    return MarginalGaussianizer(
        MarginalUniformizer::fit(x, bins, tail_fraction, clamp_eps));
  }

  Forward forward(double x) const;
  double inverse(double z) const;

  const MarginalUniformizer& uniformizer() const { return u_; }

 private:
  MarginalUniformizer u_;
};

/// Histogram differential entropy in bits with the Miller-Madow correction
///   H = -sum_k p_k log2(p_k / w) + (m - 1) / (2 N ln 2),
/// where w is the bin width and m the number of occupied bins.
double marginal_entropy(std::span<const double> x, int bins);

/// KL(marginal || N(0,1)) in bits: discrete KL between the histogram masses
/// and the standard normal masses of the same bins, Miller-Madow corrected.
/// May come out slightly negative for data that is already Gaussian.
double marginal_non_gaussianity(std::span<const double> x, int bins);

}  // namespace rbig
