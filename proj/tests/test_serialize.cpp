#include "rbig/serialize.hpp"
#include "rbig/io.hpp"
#include "rbig/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace rbig;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rbig_test_serialize";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(ModelFile, RoundTripReproducesTransformBitForBit) {
  const auto data = synth::heteroscedastic_sine(4000, 1);
  FitConfig cfg;
  cfg.rotation_kind = RotationKind::RandomHaar;
  cfg.seed = 3;
  const auto model = fit(data, cfg);
  const auto ref = transform(model, data);
  for (const char* name : {"m.json", "m.bin"}) {
    const auto path = scratch(name);
    save_model(model, path);
    const auto loaded = load_model(path);
    const auto got = transform(loaded, data);
    EXPECT_EQ(got.z, ref.z) << name;
    EXPECT_EQ(got.logjac, ref.logjac) << name;
    EXPECT_EQ(loaded.delta_t_trace(), model.delta_t_trace());
    EXPECT_EQ(loaded.config.seed, 3u);
    EXPECT_EQ(loaded.config.rotation_kind, RotationKind::RandomHaar);
    EXPECT_EQ(inverse(loaded, ref.z), inverse(model, ref.z));
  }
  EXPECT_NE(read_file(scratch("m.bin")).front(), '{');
}

TEST(ModelFile, EncodingIsDeterministic) {
  const auto data = synth::gaussian(3000, synth::equicorrelation(3, 0.5), 2);
  EXPECT_EQ(encode_model_cbor(fit(data)), encode_model_cbor(fit(data)));
}

TEST(ModelFile, RejectsMissingVersionAndForeignDocuments) {
  const auto model = fit(synth::uniform(500, 2, 4));
  auto j = model_to_json(model);
  EXPECT_EQ(j.at("version").get<int>(), kModelFormatVersion);
  j.erase("version");
  EXPECT_THROW(model_from_json(j), Error);
  j = model_to_json(model);
  j["version"] = 99;
  EXPECT_THROW(model_from_json(j), Error);
  EXPECT_THROW(model_from_json(nlohmann::json{{"format", "other"}}), Error);

  j = model_to_json(model);
  j["layers"][0]["rotation"]["entries"][1] = 0.3;
  EXPECT_THROW(model_from_json(j), Error);

  const auto path = scratch("garbage.bin");
  write_file(path, "\x01\x02\x03");
  EXPECT_THROW(load_model(path), Error);
}

TEST(ModelFile, TraceDocument) {
  const auto model = fit(synth::heteroscedastic_sine(3000, 5));
  const auto t = trace_to_json(model);
  EXPECT_EQ(t.at("delta_t").size(), model.layers.size());
  EXPECT_EQ(t.at("non_gaussianity").size(), model.layers.size());
  EXPECT_EQ(t.at("converged").get<bool>(), model.converged);
}
