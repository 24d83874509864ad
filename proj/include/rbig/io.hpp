#pragma once

#include "rbig/cube.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rbig {

struct Table {
  std::vector<std::string> header;
  SampleMatrix data;
};

/// Comma-separated, one header line, '.' decimal point.
Table load_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Table& table);
std::string format_double(double v);

enum class CubeDtype { Float32, Float64 };

/// Sidecar for "x.bin" is "x.bin.json".
std::filesystem::path sidecar_path(const std::filesystem::path& bin);
DataCube load_cube(const std::filesystem::path& bin);
void save_cube(const std::filesystem::path& bin, const DataCube& cube,
               CubeDtype dtype = CubeDtype::Float64);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace rbig
