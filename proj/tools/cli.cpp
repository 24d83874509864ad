#include "cli.hpp"

#include "rbig/cube.hpp"
#include "rbig/io.hpp"
#include "rbig/measures.hpp"
#include "rbig/serialize.hpp"
#include "rbig/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace rbig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct FitFlags {
  std::string rotation = "pca";
  int bins = 0;
  int max_layers = 100;
  double tol = 0.01;
  int patience = 3;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--rotation", rotation, "Rotation per layer")
        ->check(CLI::IsMember({"pca", "random"}));
    app->add_option("--bins", bins, "Histogram bins (0 = round(sqrt(N)))")->check(CLI::NonNegativeNumber);
    app->add_option("--max-layers", max_layers, "Layer budget")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "Convergence threshold on delta T, bits")->check(CLI::PositiveNumber);
    app->add_option("--patience", patience, "Consecutive sub-threshold layers")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Seed for random rotations");
  }

  FitConfig config() const {
    FitConfig c;
    c.rotation_kind = rotation_kind_from_string(rotation);
    c.bins = bins;
    c.max_layers = max_layers;
    c.tol_delta_t = tol;
    c.patience = patience;
    c.seed = seed;
    return c;
  }
};

struct PatchFlags {
  int spatial = 1, temporal = 1, stride_space = 1, stride_time = 1;

  void attach(CLI::App* app) {
    app->add_option("--spatial", spatial, "Patch side s (s x s pixels)")->check(CLI::PositiveNumber);
    app->add_option("--temporal", temporal, "Patch depth in time steps")->check(CLI::PositiveNumber);
    app->add_option("--stride-space", stride_space, "Anchor step in rows and cols")->check(CLI::PositiveNumber);
    app->add_option("--stride-time", stride_time, "Anchor step in time")->check(CLI::PositiveNumber);
  }

  PatchConfig config() const { return {spatial, temporal, stride_space, stride_time, true}; }
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return ss.str();
}

bool is_cube(const fs::path& path) { return fs::exists(sidecar_path(path)); }

/// Samples with column names, from CSV or from a cube through patch extraction.
struct Dataset {
  SampleMatrix data;
  std::vector<std::string> names;
  std::vector<fs::path> files;
};

Dataset load_dataset(const fs::path& path, const PatchFlags& patch) {
  Dataset d;
  if (is_cube(path)) {
    const auto ps = extract_patches(load_cube(path), patch.config());
    d.data = ps.samples;
    for (Eigen::Index j = 0; j < d.data.cols(); ++j) d.names.push_back("p" + std::to_string(j));
    d.files = {path, sidecar_path(path)};
  } else {
    auto t = load_csv(path);
    d.data = std::move(t.data);
    d.names = std::move(t.header);
    d.files = {path};
  }
  return d;
}

/// One record per run, written beside the primary output or to the error stream.
class RunRecord {
 public:
  explicit RunRecord(std::string subcommand)
      : start_(std::chrono::steady_clock::now()), j_{{"subcommand", std::move(subcommand)}} {
    j_["inputs"] = json::array();
    j_["outputs"] = json::array();
    j_["version"] = kVersion;
  }

  void set_config(json config) { j_["config"] = std::move(config); }
  void add_input(const fs::path& p) {
    j_["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_hex(read_file(p))}});
  }
  void add_output(const fs::path& p) { j_["outputs"].push_back(p.string()); }

  void finish(const std::optional<fs::path>& beside, std::ostream& err) {
    j_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (beside) {
      auto p = *beside;
      p += ".run.json";
      write_file(p, j_.dump(2) + "\n");
    } else {
      err << "run: " << j_.dump() << "\n";
    }
  }

 private:
  std::chrono::steady_clock::time_point start_;
  json j_;
};

std::string describe(const Error& e, const std::vector<std::string>& names) {
  std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
  if (e.dimension() >= 0 && e.dimension() < static_cast<int>(names.size()))
    msg += " (column '" + names[e.dimension()] + "')";
  return msg;
}

int warn_code(bool ok) { return ok ? kOk : kWarning; }

void write_report(const json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!out_path.empty()) write_file(out_path, text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotation-based iterative Gaussianization: density, synthesis and information measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // Names of the columns being processed, for diagnostics.
  std::vector<std::string> column_names;
  int code = kOk;
  std::function<void()> action;

  // fit ---------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Fit a Gaussianization model");
  FitFlags fit_flags;
  PatchFlags fit_patch;
  std::string fit_input, fit_out, fit_trace;
  fit_cmd->add_option("--input", fit_input, "CSV table or cube binary")->required();
  fit_cmd->add_option("--out", fit_out, "Model file (.json for text, CBOR otherwise)")->required();
  fit_cmd->add_option("--trace", fit_trace, "Trace JSON (default <out>.trace.json)");
  fit_flags.attach(fit_cmd);
  fit_patch.attach(fit_cmd);
  fit_cmd->callback([&] {
    action = [&] {
      RunRecord rec("fit");
      const auto ds = load_dataset(fit_input, fit_patch);
      column_names = ds.names;
      const auto model = fit(ds.data, fit_flags.config());
      save_model(model, fit_out);
      const fs::path trace = fit_trace.empty() ? fs::path(fit_out + ".trace.json") : fs::path(fit_trace);
      write_file(trace, trace_to_json(model).dump(2) + "\n");
      for (const auto& f : ds.files) rec.add_input(f);
      rec.set_config(config_to_json(model.config));
      rec.add_output(fit_out);
      rec.add_output(trace);
      rec.finish(fs::path(fit_out), err);
      if (!model.converged)
        err << "warning: " << (model.degenerate ? "a rotated dimension collapsed" : "max layers reached")
            << " before convergence\n";
      code = warn_code(model.converged);
    };
  });

  // transform ---------------------------------------------------------------
  auto* tr_cmd = app.add_subcommand("transform", "Map samples to the Gaussian domain");
  std::string tr_model, tr_input, tr_out;
  PatchFlags tr_patch;
  tr_cmd->add_option("--model", tr_model, "Fitted model")->required();
  tr_cmd->add_option("--input", tr_input, "CSV table or cube binary")->required();
  tr_cmd->add_option("--out", tr_out, "Output CSV: z columns and log-density in bits")->required();
  tr_patch.attach(tr_cmd);
  tr_cmd->callback([&] {
    action = [&] {
      RunRecord rec("transform");
      const auto model = load_model(tr_model);
      const auto ds = load_dataset(tr_input, tr_patch);
      column_names = ds.names;
      const auto t = transform(model, ds.data);
      const Vector ld = log_density(model, ds.data);
      Table table;
      for (int d = 0; d < model.dim; ++d) table.header.push_back("z" + std::to_string(d));
      table.header.push_back("log_density_bits");
      table.data.resize(t.z.rows(), model.dim + 1);
      table.data.leftCols(model.dim) = t.z;
      table.data.col(model.dim) = ld;
      write_csv(tr_out, table);
      rec.add_input(tr_model);
      for (const auto& f : ds.files) rec.add_input(f);
      rec.add_output(tr_out);
      rec.finish(fs::path(tr_out), err);
    };
  });

  // sample ------------------------------------------------------------------
  auto* sa_cmd = app.add_subcommand("sample", "Draw synthetic samples from a fitted model");
  std::string sa_model, sa_out;
  std::size_t sa_n = 1000;
  std::uint64_t sa_seed = 0;
  sa_cmd->add_option("--model", sa_model, "Fitted model")->required();
  sa_cmd->add_option("--n", sa_n, "Number of samples")->check(CLI::PositiveNumber);
  sa_cmd->add_option("--seed", sa_seed, "Seed");
  sa_cmd->add_option("--out", sa_out, "Output CSV")->required();
  sa_cmd->callback([&] {
    action = [&] {
      RunRecord rec("sample");
      const auto model = load_model(sa_model);
      Table table;
      for (int d = 0; d < model.dim; ++d) table.header.push_back("x" + std::to_string(d));
      table.data = sample(model, sa_n, sa_seed);
      write_csv(sa_out, table);
      rec.set_config({{"n", sa_n}, {"seed", sa_seed}});
      rec.add_input(sa_model);
      rec.add_output(sa_out);
      rec.finish(fs::path(sa_out), err);
    };
  });

  // entropy / tc ------------------------------------------------------------
  struct MeasureCmd {
    FitFlags flags;
    PatchFlags patch;
    std::string input, out;
    bool per_feature = false;
  };
  MeasureCmd ent, tc;
  const auto add_measure = [&](const char* name, const char* help, MeasureCmd& m, Quantity q) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--input", m.input, "CSV table or cube binary")->required();
    cmd->add_option("--out", m.out, "Also write the report here");
    cmd->add_flag("--per-feature", m.per_feature, "Divide by the number of dimensions");
    m.flags.attach(cmd);
    m.patch.attach(cmd);
    cmd->callback([&, name, q] {
      action = [&, name, q] {
        RunRecord rec(name);
        const auto ds = load_dataset(m.input, m.patch);
        column_names = ds.names;
        const auto model = fit(ds.data, m.flags.config());
        auto report = q == Quantity::Entropy ? entropy(model) : total_correlation(model);
        if (m.per_feature) report = per_feature(report);
        auto j = to_json(report);
        j["normalization"] = m.per_feature ? "per_feature" : "none";
        write_report(j, m.out, out);
        for (const auto& f : ds.files) rec.add_input(f);
        rec.set_config(config_to_json(model.config));
        if (!m.out.empty()) rec.add_output(m.out);
        rec.finish(m.out.empty() ? std::nullopt : std::optional<fs::path>(m.out), err);
        code = warn_code(model.converged);
      };
    });
  };
  add_measure("entropy", "Joint differential entropy in bits", ent, Quantity::Entropy);
  add_measure("tc", "Total correlation in bits", tc, Quantity::TotalCorrelation);

  // mi ----------------------------------------------------------------------
  auto* mi_cmd = app.add_subcommand("mi", "Mutual information between paired datasets");
  FitFlags mi_flags;
  std::string mi_x, mi_y, mi_out;
  mi_cmd->add_option("--x", mi_x, "CSV for X")->required();
  mi_cmd->add_option("--y", mi_y, "CSV for Y (same row count)")->required();
  mi_cmd->add_option("--out", mi_out, "Also write the report here");
  mi_flags.attach(mi_cmd);
  mi_cmd->callback([&] {
    action = [&] {
      RunRecord rec("mi");
      const auto x = load_csv(mi_x);
      const auto y = load_csv(mi_y);
      column_names = x.header;
      column_names.insert(column_names.end(), y.header.begin(), y.header.end());
      const auto report = mutual_information(x.data, y.data, mi_flags.config());
      write_report(to_json(report), mi_out, out);
      rec.add_input(mi_x);
      rec.add_input(mi_y);
      rec.set_config(config_to_json(report.config));
      if (!mi_out.empty()) rec.add_output(mi_out);
      rec.finish(mi_out.empty() ? std::nullopt : std::optional<fs::path>(mi_out), err);
      code = warn_code(report.converged);
    };
  });

  // info-map ----------------------------------------------------------------
  auto* im_cmd = app.add_subcommand("info-map", "Per-anchor information of cube patches, in bits");
  std::string im_model, im_input, im_out;
  PatchFlags im_patch;
  im_cmd->add_option("--model", im_model, "Model fitted on patches of the same shape")->required();
  im_cmd->add_option("--input", im_input, "Cube binary with JSON sidecar")->required();
  im_cmd->add_option("--out", im_out, "Output grid binary (float64) with sidecar")->required();
  im_patch.attach(im_cmd);
  im_cmd->callback([&] {
    action = [&] {
      RunRecord rec("info-map");
      const auto model = load_model(im_model);
      const auto cfg = im_patch.config();
      if (model.dim != cfg.dim())
        throw Error(ErrorKind::DimensionMismatch,
                    "model has " + std::to_string(model.dim) + " dims but patches have " +
                        std::to_string(cfg.dim()));
      const auto cube = load_cube(im_input);
      const auto ps = extract_patches(cube, cfg);
      if (ps.anchors.empty()) throw Error(ErrorKind::InvalidArgument, "no complete patches in cube");
      const Vector info = information(model, ps.samples);
      std::vector<double> grid(static_cast<std::size_t>(ps.grid_t) * ps.grid_r * ps.grid_c, std::nan(""));
      for (std::size_t i = 0; i < ps.anchors.size(); ++i) {
        const auto& a = ps.anchors[i];
        const std::size_t gt = a.t / cfg.stride_time, gr = a.r / cfg.stride_space, gc = a.c / cfg.stride_space;
        grid[(gt * ps.grid_r + gr) * ps.grid_c + gc] = info[static_cast<Eigen::Index>(i)];
      }
      std::optional<GridMeta> meta;
      if (cube.meta()) {
        auto g = *cube.meta();
        g.dlat *= cfg.stride_space;
        g.dlon *= cfg.stride_space;
        g.dt_days *= cfg.stride_time;
        meta = g;
      }
      save_cube(im_out, DataCube(ps.grid_t, ps.grid_r, ps.grid_c, std::move(grid), meta), CubeDtype::Float64);
      auto side = json::parse(read_file(sidecar_path(im_out)));
      side["units"] = "bits";
      side["quantity"] = "information";
      side["patch"] = {{"spatial", cfg.spatial},
                       {"temporal", cfg.temporal},
                       {"stride_space", cfg.stride_space},
                       {"stride_time", cfg.stride_time}};
      write_file(sidecar_path(im_out), side.dump(2) + "\n");
      rec.add_input(im_model);
      rec.add_input(im_input);
      rec.add_input(sidecar_path(im_input));
      rec.add_output(im_out);
      rec.add_output(sidecar_path(im_out));
      rec.finish(fs::path(im_out), err);
    };
  });

  // sweep -------------------------------------------------------------------
  auto* sw_cmd = app.add_subcommand("sweep", "Entropy per feature across spatial/temporal patch ratios");
  FitFlags sw_flags;
  std::string sw_input, sw_out;
  int sw_budget = 16, sw_ratios = 5;
  sw_cmd->add_option("--input", sw_input, "Cube binary with JSON sidecar")->required();
  sw_cmd->add_option("--budget", sw_budget, "Target patch dimensionality")->check(CLI::PositiveNumber);
  sw_cmd->add_option("--n-ratios", sw_ratios, "Number of configurations")->check(CLI::PositiveNumber);
  sw_cmd->add_option("--out", sw_out, "Also write the report here");
  sw_flags.attach(sw_cmd);
  sw_cmd->callback([&] {
    action = [&] {
      RunRecord rec("sweep");
      const auto cube = load_cube(sw_input);
      json rows = json::array();
      bool converged = true;
      for (const auto& cfg : ratio_sweep_configs(sw_budget, sw_ratios, cube.T(), cube.H(), cube.W())) {
        const auto ps = extract_patches(cube, cfg);
        const auto model = fit(ps.samples, sw_flags.config());
        converged = converged && model.converged;
        rows.push_back({{"spatial", cfg.spatial},
                        {"temporal", cfg.temporal},
                        {"dim", cfg.dim()},
                        {"ratio", cfg.ratio()},
                        {"n_samples", ps.samples.rows()},
                        {"entropy_per_feature_bits", per_feature(entropy(model)).value_bits},
                        {"total_correlation_bits", model.total_correlation}});
      }
      write_report({{"budget", sw_budget}, {"configs", rows}}, sw_out, out);
      rec.add_input(sw_input);
      rec.add_input(sidecar_path(sw_input));
      rec.set_config(config_to_json(sw_flags.config()));
      if (!sw_out.empty()) rec.add_output(sw_out);
      rec.finish(sw_out.empty() ? std::nullopt : std::optional<fs::path>(sw_out), err);
      code = warn_code(converged);
    };
  });

  // synth -------------------------------------------------------------------
  auto* sy_cmd = app.add_subcommand("synth", "Write a deterministic synthetic dataset");
  std::string sy_kind, sy_out, sy_out_y;
  std::size_t sy_n = 10000;
  std::uint64_t sy_seed = 0;
  double sy_rho = 0.5, sy_phi = 0.9;
  int sy_dim = 2, sy_T = 46, sy_H = 16, sy_W = 16;
  sy_cmd->add_option("kind", sy_kind, "gauss | sine | mixture | ar1-cube")
      ->required()
      ->check(CLI::IsMember({"gauss", "sine", "mixture", "ar1-cube"}));
  sy_cmd->add_option("--n", sy_n, "Rows")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--seed", sy_seed, "Seed");
  sy_cmd->add_option("--rho", sy_rho, "gauss: equicorrelation");
  sy_cmd->add_option("--dim", sy_dim, "gauss: dimensions")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--phi", sy_phi, "ar1-cube: lag-one coefficient");
  sy_cmd->add_option("--T", sy_T, "ar1-cube: time steps")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--H", sy_H, "ar1-cube: rows")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--W", sy_W, "ar1-cube: cols")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--out", sy_out, "Output CSV, or cube binary for ar1-cube")->required();
  sy_cmd->add_option("--out-y", sy_out_y, "gauss: write the second half of the columns here");
  sy_cmd->callback([&] {
    action = [&] {
      RunRecord rec("synth");
      json cfg{{"kind", sy_kind}, {"seed", sy_seed}};
      if (sy_kind == "ar1-cube") {
        save_cube(sy_out, synth::ar1_cube(sy_T, sy_H, sy_W, sy_phi, sy_seed));
        cfg.update({{"T", sy_T}, {"H", sy_H}, {"W", sy_W}, {"phi", sy_phi}});
        rec.add_output(sy_out);
        rec.add_output(sidecar_path(sy_out));
      } else {
        SampleMatrix data;
        if (sy_kind == "gauss") {
          if (!(std::abs(sy_rho) < 1.0) || sy_rho <= -1.0 / (sy_dim - 1 + 1e-300))
            throw Error(ErrorKind::InvalidArgument, "rho must give a positive definite correlation");
          data = synth::gaussian(sy_n, synth::equicorrelation(sy_dim, sy_rho), sy_seed);
          cfg.update({{"rho", sy_rho}, {"dim", sy_dim}});
        } else if (sy_kind == "sine") {
          data = synth::heteroscedastic_sine(sy_n, sy_seed);
        } else {
          data = synth::gaussian_mixture(sy_n, sy_seed);
        }
        cfg["n"] = sy_n;
        const auto cols = static_cast<int>(data.cols());
        const int split = sy_out_y.empty() ? cols : cols / 2;
        if (split < 1) throw Error(ErrorKind::InvalidArgument, "--out-y needs at least two columns");
        Table x;
        for (int d = 0; d < split; ++d) x.header.push_back("x" + std::to_string(d));
        x.data = data.leftCols(split);
        write_csv(sy_out, x);
        rec.add_output(sy_out);
        if (!sy_out_y.empty()) {
          Table y;
          for (int d = split; d < cols; ++d) y.header.push_back("y" + std::to_string(d - split));
          y.data = data.rightCols(cols - split);
          write_csv(sy_out_y, y);
          rec.add_output(sy_out_y);
        }
      }
      rec.set_config(cfg);
      rec.finish(fs::path(sy_out), err);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (action) action();
  } catch (const Error& e) {
    err << "error: " << describe(e, column_names) << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}

}  // namespace rbig::cli
