#include "rbig/measures.hpp"

#include "rbig/serialize.hpp"

#include <algorithm>
#include <numeric>

namespace rbig {

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::Entropy: return "entropy";
    case Quantity::TotalCorrelation: return "total_correlation";
    case Quantity::MutualInformation: return "mutual_information";
  }
  return "unknown";
}

namespace {

ITReport report_from(const GaussModel& model, Quantity q, double raw) {
  ITReport r;
  r.quantity = q;
  r.raw_value_bits = raw;
  r.value_bits = q == Quantity::Entropy ? raw : std::max(raw, 0.0);
  r.per_layer_delta_t = model.delta_t_trace();
  r.n_samples = model.n_train;
  r.dim = model.dim;
  r.config = model.config;
  r.converged = model.converged;
  return r;
}

}  // namespace

ITReport per_feature(ITReport report) {
  report.value_bits /= report.dim;
  report.raw_value_bits /= report.dim;
  return report;
}

nlohmann::json to_json(const ITReport& r) {
  return {{"quantity", to_string(r.quantity)},
          {"value_bits", r.value_bits},
          {"raw_value_bits", r.raw_value_bits},
          {"per_layer_delta_t", r.per_layer_delta_t},
          {"n_samples", r.n_samples},
          {"dim", r.dim},
          {"converged", r.converged},
          {"config", config_to_json(r.config)}};
}

ITReport total_correlation(const GaussModel& model) {
  return report_from(model, Quantity::TotalCorrelation, model.total_correlation);
}

ITReport total_correlation(const SampleMatrix& data, const FitConfig& config) {
  return total_correlation(fit(data, config));
}

ITReport entropy(const GaussModel& model) {
  const double marginals = std::accumulate(model.marginal_entropies_input.begin(),
                                           model.marginal_entropies_input.end(), 0.0);
  return report_from(model, Quantity::Entropy, marginals - model.total_correlation);
}

ITReport entropy(const SampleMatrix& data, const FitConfig& config) {
  return entropy(fit(data, config));
}

ITReport mutual_information(const SampleMatrix& X, const SampleMatrix& Y, const FitConfig& config) {
  if (X.rows() != Y.rows())
    throw Error(ErrorKind::PairedLengthMismatch,
                "mutual_information: X has " + std::to_string(X.rows()) + " rows, Y has " +
                    std::to_string(Y.rows()));
  const GaussModel gx = fit(X, config);
  const GaussModel gy = fit(Y, config);
  SampleMatrix joint(X.rows(), X.cols() + Y.cols());
  joint.leftCols(X.cols()) = transform(gx, X).z;
  joint.rightCols(Y.cols()) = transform(gy, Y).z;
  const GaussModel gj = fit(joint, config);
  auto r = report_from(gj, Quantity::MutualInformation, gj.total_correlation);
  r.converged = gx.converged && gy.converged && gj.converged;
  return r;
}

}  // namespace rbig
