#include "rbig/serialize.hpp"

#include "rbig/io.hpp"

#include <fstream>

namespace rbig {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Format, std::string("model: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, std::string("model: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

json config_to_json(const FitConfig& c) {
  return json{{"rotation", to_string(c.rotation_kind)},
              {"bins", c.bins},
              {"tail_fraction", c.tail_fraction},
              {"clamp_eps", c.clamp_eps},
              {"max_layers", c.max_layers},
              {"tol_delta_t", c.tol_delta_t},
              {"patience", c.patience},
              {"seed", c.seed}};
}

FitConfig config_from_json(const json& j) {
  FitConfig c;
  c.rotation_kind = rotation_kind_from_string(get_field<std::string>(j, "rotation"));
  c.bins = get_field<int>(j, "bins");
  c.tail_fraction = get_field<double>(j, "tail_fraction");
  c.clamp_eps = get_field<double>(j, "clamp_eps");
  c.max_layers = get_field<int>(j, "max_layers");
  c.tol_delta_t = get_field<double>(j, "tol_delta_t");
  c.patience = get_field<int>(j, "patience");
  c.seed = get_field<std::uint64_t>(j, "seed");
  return c;
}

json model_to_json(const GaussModel& m) {
  json layers = json::array();
  for (const auto& l : m.layers) {
    json marginals = json::array();
    for (const auto& g : l.gaussianizers) {
      const auto& u = g.uniformizer();
      marginals.push_back(
          {{"knots_x", u.knots_x()}, {"knots_p", u.knots_p()}, {"clamp_eps", u.clamp_eps()}});
    }
    const auto& e = l.rotation.entries();
    std::vector<double> entries;
    entries.reserve(e.size());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      for (Eigen::Index k = 0; k < e.cols(); ++k) entries.push_back(e(i, k));
    layers.push_back({{"delta_t", l.delta_t},
                      {"non_gaussianity", l.non_gaussianity},
                      {"rotation",
                       {{"kind", to_string(l.rotation.kind())},
                        {"rank_deficient", l.rotation.rank_deficient()},
                        {"entries", entries}}},
                      {"marginals", marginals}});
  }
  return json{{"format", "rbig-model"},
              {"version", kModelFormatVersion},
              {"dim", m.dim},
              {"n_train", m.n_train},
              {"converged", m.converged},
              {"degenerate", m.degenerate},
              {"total_correlation", m.total_correlation},
              {"marginal_entropies_input", m.marginal_entropies_input},
              {"config", config_to_json(m.config)},
              {"layers", layers}};
}

GaussModel model_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "rbig-model")
    throw Error(ErrorKind::Format, "not an rbig model document");
  const int version = get_field<int>(j, "version");
  if (version != kModelFormatVersion)
    throw Error(ErrorKind::Format, "unsupported model version " + std::to_string(version));

  GaussModel m;
  m.dim = get_field<int>(j, "dim");
  m.n_train = get_field<std::size_t>(j, "n_train");
  m.converged = get_field<bool>(j, "converged");
  m.degenerate = get_field<bool>(j, "degenerate");
  m.total_correlation = get_field<double>(j, "total_correlation");
  m.marginal_entropies_input = get_field<std::vector<double>>(j, "marginal_entropies_input");
  m.config = config_from_json(j.at("config"));
  if (m.dim < 1) throw Error(ErrorKind::Format, "model dim must be >= 1");

  for (const auto& jl : j.at("layers")) {
    GaussLayer l;
    l.delta_t = get_field<double>(jl, "delta_t");
    l.non_gaussianity = get_field<double>(jl, "non_gaussianity");
    const auto& jr = jl.at("rotation");
    const auto entries = get_field<std::vector<double>>(jr, "entries");
    if (entries.size() != static_cast<std::size_t>(m.dim) * m.dim)
      throw Error(ErrorKind::Format, "rotation entry count does not match dim");
    Eigen::MatrixXd r(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i)
      for (int k = 0; k < m.dim; ++k) r(i, k) = entries[static_cast<std::size_t>(i) * m.dim + k];
    l.rotation = RotationMatrix(std::move(r),
                                rotation_kind_from_string(get_field<std::string>(jr, "kind")),
                                get_field<bool>(jr, "rank_deficient"));
    const auto& jm = jl.at("marginals");
    if (jm.size() != static_cast<std::size_t>(m.dim))
      throw Error(ErrorKind::Format, "marginal count does not match dim");
    for (const auto& g : jm) {
      l.gaussianizers.emplace_back(MarginalUniformizer(get_field<std::vector<double>>(g, "knots_x"),
                                                       get_field<std::vector<double>>(g, "knots_p"),
                                                       get_field<double>(g, "clamp_eps")));
    }
    m.layers.push_back(std::move(l));
  }
  if (m.layers.empty()) throw Error(ErrorKind::Format, "model has no layers");
  return m;
}

json trace_to_json(const GaussModel& m) {
  return json{{"dim", m.dim},
              {"n_train", m.n_train},
              {"layers", m.layers.size()},
              {"converged", m.converged},
              {"degenerate", m.degenerate},
              {"total_correlation", m.total_correlation},
              {"delta_t", m.delta_t_trace()},
              {"non_gaussianity", m.non_gaussianity_trace()},
              {"config", config_to_json(m.config)}};
}

std::vector<std::uint8_t> encode_model_cbor(const GaussModel& model) {
  return json::to_cbor(model_to_json(model));
}

void save_model(const GaussModel& model, const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    write_file(path, model_to_json(model).dump() + "\n");
  } else {
    const auto bytes = encode_model_cbor(model);
    write_file(path, std::string(bytes.begin(), bytes.end()));
  }
}

GaussModel load_model(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.empty()) throw Error(ErrorKind::Format, "empty model file " + path.string());
  try {
    const json j = bytes.front() == '{' ? json::parse(bytes) : json::from_cbor(bytes);
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, "cannot decode model " + path.string() + ": " + e.what());
  }
}

}  // namespace rbig
