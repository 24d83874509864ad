#pragma once

#include "rbig/flow.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rbig {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json config_to_json(const FitConfig& config);
FitConfig config_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const GaussModel& model);
GaussModel model_from_json(const nlohmann::json& j);

/// Per-layer delta_t and non-Gaussianity, plus the fit summary.
nlohmann::json trace_to_json(const GaussModel& model);

/// Writes JSON text when the path ends in ".json", CBOR otherwise.
void save_model(const GaussModel& model, const std::filesystem::path& path);
/// Accepts either encoding.
GaussModel load_model(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_model_cbor(const GaussModel& model);

}  // namespace rbig
