#include "rbig/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rbig {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

}  // namespace

Table load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, path.string() + ": missing header");
  for (auto& name : split_line(line)) t.header.push_back(strip(name));

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != t.header.size())
      throw Error(ErrorKind::Format, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                         std::to_string(t.header.size()) + " fields, got " +
                                         std::to_string(fields.size()));
    for (const auto& raw : fields) {
      const std::string f = strip(raw);
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw Error(ErrorKind::Format,
                    path.string() + ":" + std::to_string(lineno) + ": bad number '" + f + "'");
      values.push_back(v);
    }
    ++rows;
  }
  t.data = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(t.header.size()));
  return t;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  if (!table.header.empty() && static_cast<Eigen::Index>(table.header.size()) != table.data.cols())
    throw Error(ErrorKind::DimensionMismatch, "csv header does not match column count");
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < table.data.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.data.cols(); ++j) {
      if (j) out += ',';
      out += format_double(table.data(i, j));
    }
    out += '\n';
  }
  write_file(path, out);
}

// ---------------------------------------------------------------------------

std::filesystem::path sidecar_path(const std::filesystem::path& bin) {
  auto p = bin;
  p += ".json";
  return p;
}

namespace {

template <typename T>
T from_little_endian(const char* bytes) {
  std::array<char, sizeof(T)> buf;
  std::memcpy(buf.data(), bytes, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
  return std::bit_cast<T>(buf);
}

template <typename T>
void append_little_endian(std::string& out, T v) {
  auto buf = std::bit_cast<std::array<char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
  out.append(buf.data(), buf.size());
}

}  // namespace

DataCube load_cube(const std::filesystem::path& bin) {
  json side;
  try {
    side = json::parse(read_file(sidecar_path(bin)));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, sidecar_path(bin).string() + ": " + e.what());
  }
  int T, H, W;
  std::string dtype;
  std::optional<double> fill;
  std::optional<GridMeta> meta;
  try {
    T = side.at("T").get<int>();
    H = side.at("H").get<int>();
    W = side.at("W").get<int>();
    dtype = side.value("dtype", "float64");
    if (side.contains("fill_value") && !side["fill_value"].is_null())
      fill = side["fill_value"].get<double>();
    if (side.contains("grid_meta") && side["grid_meta"].is_object()) {
      const auto& g = side["grid_meta"];
      meta = GridMeta{g.value("lat0", 0.0), g.value("lon0", 0.0), g.value("dlat", 0.0),
                      g.value("dlon", 0.0), g.value("dt_days", 0.0)};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, sidecar_path(bin).string() + ": " + e.what());
  }
  if (dtype != "float32" && dtype != "float64")
    throw Error(ErrorKind::Format, "cube dtype must be float32 or float64, got " + dtype);
  if (T < 1 || H < 1 || W < 1) throw Error(ErrorKind::Format, "cube dimensions must be >= 1");

  const std::string bytes = read_file(bin);
  const std::size_t count = static_cast<std::size_t>(T) * H * W;
  const std::size_t width = dtype == "float32" ? 4 : 8;
  if (bytes.size() != count * width)
    throw Error(ErrorKind::Format, bin.string() + ": expected " + std::to_string(count * width) +
                                       " bytes, found " + std::to_string(bytes.size()));
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const char* p = bytes.data() + i * width;
    double v = width == 4 ? static_cast<double>(from_little_endian<float>(p))
                          : from_little_endian<double>(p);
    if (fill && (v == *fill || (width == 4 && static_cast<float>(v) == static_cast<float>(*fill))))
      v = std::nan("");
    values[i] = v;
  }
  return DataCube(T, H, W, std::move(values), meta);
}

void save_cube(const std::filesystem::path& bin, const DataCube& cube, CubeDtype dtype) {
  const bool f32 = dtype == CubeDtype::Float32;
  std::string bytes;
  bytes.reserve(cube.values().size() * (f32 ? 4 : 8));
  for (double v : cube.values()) {
    if (f32)
      append_little_endian(bytes, static_cast<float>(v));
    else
      append_little_endian(bytes, v);
  }
  write_file(bin, bytes);
  json side{{"T", cube.T()},
            {"H", cube.H()},
            {"W", cube.W()},
            {"dtype", f32 ? "float32" : "float64"},
            {"fill_value", nullptr}};
  if (cube.meta()) {
    const auto& g = *cube.meta();
    side["grid_meta"] = {{"lat0", g.lat0}, {"lon0", g.lon0}, {"dlat", g.dlat},
                         {"dlon", g.dlon}, {"dt_days", g.dt_days}};
  }
  write_file(sidecar_path(bin), side.dump(2) + "\n");
}

}  // namespace rbig
