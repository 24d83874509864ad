#pragma once

#include "rbig/flow.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rbig {

enum class Quantity { Entropy, TotalCorrelation, MutualInformation };

const char* to_string(Quantity q);

struct ITReport {
  Quantity quantity = Quantity::Entropy;
  double value_bits = 0.0;      ///< clamped at 0 for T and MI
  double raw_value_bits = 0.0;  ///< estimator output before clamping
  std::vector<double> per_layer_delta_t;
  std::size_t n_samples = 0;
  int dim = 0;
  FitConfig config;
  bool converged = true;
};

/// Entropy divided by the number of dimensions.
ITReport per_feature(ITReport report);

nlohmann::json to_json(const ITReport& report);

ITReport total_correlation(const SampleMatrix& data, const FitConfig& config = {});
ITReport total_correlation(const GaussModel& model);

/// Sum of raw marginal entropies minus total correlation.
ITReport entropy(const SampleMatrix& data, const FitConfig& config = {});
ITReport entropy(const GaussModel& model);

/// Total correlation of [Gx(X), Gy(Y)] with Gx, Gy fitted separately.
/// Rows of X and Y are paired.
ITReport mutual_information(const SampleMatrix& X, const SampleMatrix& Y,
                            const FitConfig& config = {});

inline Vector information_map(const GaussModel& model, const SampleMatrix& data) {
  return information(model, data);
}

}  // namespace rbig
