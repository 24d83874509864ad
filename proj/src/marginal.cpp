#include "rbig/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rbig {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorKind::ProbabilityOutOfRange,
                "probability " + std::to_string(p) + " outside (0, 1)");
}

struct Range {
  double lo, hi;
};

Range finite_range(std::span<const double> x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "non-finite sample");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) throw Error(ErrorKind::DegenerateDimension, "zero range");
  return {lo, hi};
}

// Counts over `bins` equal-width bins spanning [lo, hi]; hi falls in the last bin.
std::vector<double> histogram(std::span<const double> x, Range r, int bins) {
  std::vector<double> counts(bins, 0.0);
  const double scale = bins / (r.hi - r.lo);
  for (double v : x) {
    auto k = static_cast<long>((v - r.lo) * scale);
    k = std::clamp<long>(k, 0, bins - 1);
    counts[k] += 1.0;
  }
  return counts;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_log_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double probit(double p) {
  check_probability(p);
  // Acklam's rational approximation, lower and central regions only.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  // 1 - p is exact for p > 0.5, so q is the same for p and 1 - p.
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;

  double z;
  if (q < kLowBreak) {
    const double t = std::sqrt(-2.0 * std::log(q));
    z = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else {
    const double u = q - 0.5;
    const double r = u * u;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  if (q != 0.5) {
    const double err = normal_cdf(z) - q;
    z -= err / std::exp(normal_log_pdf(z));
  }
  return upper ? -z : z;
}

int default_bins(std::size_t n) {
  return std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
}

double default_clamp_eps(std::size_t n) {
  return std::max(1e-7, 1.0 / (2.0 * static_cast<double>(n)));
}

// ---------------------------------------------------------------------------

MarginalUniformizer::MarginalUniformizer(std::vector<double> knots_x,
                                         std::vector<double> knots_p, double clamp_eps)
    : knots_x_(std::move(knots_x)), knots_p_(std::move(knots_p)), clamp_eps_(clamp_eps) {
  if (knots_x_.size() < 2 || knots_x_.size() != knots_p_.size())
    throw Error(ErrorKind::Format, "uniformizer knots: need two or more of equal length");
  if (!(clamp_eps_ > 0.0 && clamp_eps_ < 0.5))
    throw Error(ErrorKind::InvalidArgument, "clamp_eps must lie in (0, 0.5)");
  if (knots_p_.front() != 0.0 || knots_p_.back() != 1.0)
    throw Error(ErrorKind::Format, "uniformizer CDF must run from 0 to 1");
  for (std::size_t i = 1; i < knots_x_.size(); ++i) {
    if (!(knots_x_[i] > knots_x_[i - 1]))
      throw Error(ErrorKind::Format, "uniformizer knots_x not strictly increasing");
    if (knots_p_[i] < knots_p_[i - 1])
      throw Error(ErrorKind::Format, "uniformizer knots_p decreasing");
  }
}

MarginalUniformizer MarginalUniformizer::fit(std::span<const double> x, int bins,
                                             double tail_fraction, double clamp_eps) {
  if (x.size() < 2) throw Error(ErrorKind::InsufficientSamples, "uniformizer needs N >= 2");
  if (bins < 2) throw Error(ErrorKind::InvalidArgument, "bins must be >= 2");
  if (!(tail_fraction >= 0.0) || !std::isfinite(tail_fraction))
    throw Error(ErrorKind::InvalidArgument, "tail_fraction must be >= 0");
  if (!(clamp_eps > 0.0 && clamp_eps < 0.5))
    throw Error(ErrorKind::InvalidArgument, "clamp_eps must lie in (0, 0.5)");

  const Range r = finite_range(x);
  const double range = r.hi - r.lo;
  auto weights = histogram(x, r, bins);
  // Pseudo-count totalling one sample keeps every interior segment sloped.
  const double pseudo = 1.0 / bins;
  double total = 0.0;
  for (double& w : weights) total += (w += pseudo);

  const bool extend = tail_fraction > 0.0;
  // Each extension segment carries clamp_eps of mass, so the training minimum
  // maps to clamp_eps and the maximum to 1 - clamp_eps.
  const double tail_mass = extend ? clamp_eps : 0.0;
  const double interior_mass = 1.0 - 2.0 * tail_mass;

  std::vector<double> kx, kp;
  kx.reserve(bins + 3);
  kp.reserve(bins + 3);
  if (extend) {
    kx.push_back(r.lo - tail_fraction * range);
    kp.push_back(0.0);
  }
  double cum = 0.0;
  for (int k = 0; k <= bins; ++k) {
    kx.push_back(k == bins ? r.hi : r.lo + range * k / bins);
    kp.push_back(k == 0 ? tail_mass : tail_mass + interior_mass * (cum / total));
    if (k < bins) cum += weights[k];
  }
  if (extend) {
    kp.back() = 1.0 - tail_mass;
    kx.push_back(r.hi + tail_fraction * range);
    kp.push_back(1.0);
  } else {
    kp.back() = 1.0;
  }
  return MarginalUniformizer(std::move(kx), std::move(kp), clamp_eps);
}

MarginalUniformizer::Forward MarginalUniformizer::forward(double x) const {
  const std::size_t n = knots_x_.size();
  // Segment k spans [knots_x[k], knots_x[k+1]); values outside use the end segments.
  std::size_t k;
  if (x <= knots_x_.front()) {
    k = 0;
  } else if (x >= knots_x_.back()) {
    k = n - 2;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(knots_x_.begin(), knots_x_.end(), x) -
                                 knots_x_.begin()) - 1;
  }
  const double dx = knots_x_[k + 1] - knots_x_[k];
  const double slope = (knots_p_[k + 1] - knots_p_[k]) / dx;
  double p;
  if (x <= knots_x_.front()) {
    p = 0.0;
  } else if (x >= knots_x_.back()) {
    p = 1.0;
  } else {
    p = knots_p_[k] + slope * (x - knots_x_[k]);
  }
  p = std::clamp(p, clamp_eps_, 1.0 - clamp_eps_);
  return {p, std::log(slope)};
}

double MarginalUniformizer::inverse(double p) const {
  check_probability(p);
  const auto lo = std::lower_bound(knots_p_.begin(), knots_p_.end(), p);
  const auto hi = std::upper_bound(lo, knots_p_.end(), p);
  if (lo != hi) {
    // p sits on one or more knots; a run of equal values is a flat CDF segment.
    const auto first = static_cast<std::size_t>(lo - knots_p_.begin());
    const auto last = static_cast<std::size_t>(hi - knots_p_.begin()) - 1;
    return 0.5 * (knots_x_[first] + knots_x_[last]);
  }
  const auto j = static_cast<std::size_t>(hi - knots_p_.begin());
  const double t = (p - knots_p_[j - 1]) / (knots_p_[j] - knots_p_[j - 1]);
  return knots_x_[j - 1] + t * (knots_x_[j] - knots_x_[j - 1]);
}

MarginalGaussianizer::Forward MarginalGaussianizer::forward(double x) const {
  const auto [p, logdpdx] = u_.forward(x);
  const double z = probit(p);
  return {z, logdpdx - normal_log_pdf(z)};
}

double MarginalGaussianizer::inverse(double z) const {
  double p = z > 0.0 ? 1.0 - normal_cdf(-z) : normal_cdf(z);
  p = std::clamp(p, std::numeric_limits<double>::min(),
                 1.0 - std::numeric_limits<double>::epsilon() / 2);
  return u_.inverse(p);
}

// ---------------------------------------------------------------------------

double marginal_entropy(std::span<const double> x, int bins) {
  if (x.size() < 10) throw Error(ErrorKind::InsufficientSamples, "entropy needs N >= 10");
  if (bins < 1) throw Error(ErrorKind::InvalidArgument, "bins must be >= 1");
  const Range r = finite_range(x);
  const auto counts = histogram(x, r, bins);
  const double n = static_cast<double>(x.size());
  const double width = (r.hi - r.lo) / bins;
  double h = 0.0;
  int occupied = 0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    ++occupied;
    const double pk = c / n;
    h -= pk * std::log2(pk / width);
  }
  return h + (occupied - 1) / (2.0 * n * kLn2);
}

double marginal_non_gaussianity(std::span<const double> x, int bins) {
  if (x.size() < 10) throw Error(ErrorKind::InsufficientSamples, "entropy needs N >= 10");
  const Range r = finite_range(x);
  const auto counts = histogram(x, r, bins);
  const double n = static_cast<double>(x.size());
  double kl = 0.0;
  int occupied = 0;
  double cdf_lo = normal_cdf(r.lo);
  for (int k = 0; k < bins; ++k) {
    const double edge = k + 1 == bins ? r.hi : r.lo + (r.hi - r.lo) * (k + 1) / bins;
    const double cdf_hi = normal_cdf(edge);
    if (counts[k] > 0.0) {
      ++occupied;
      const double pk = counts[k] / n;
      const double qk = std::max(cdf_hi - cdf_lo, 1e-300);
      kl += pk * std::log2(pk / qk);
    }
    cdf_lo = cdf_hi;
  }
  return kl - (occupied - 1) / (2.0 * n * kLn2);
}

}  // namespace rbig
