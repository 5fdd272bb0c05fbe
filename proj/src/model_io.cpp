#include "msl/model_io.hpp"

#include <fstream>

#include "msl/binary_io.hpp"

namespace msl {

namespace fs = std::filesystem;

InferrerParams quantize_to_float(const InferrerParams& params) {
  std::vector<double> flat = params.flatten();
  for (double& v : flat) v = static_cast<double>(static_cast<float>(v));
  return InferrerParams::unflatten(params.arch, flat);
}

void write_model(const fs::path& dir, const InferrerParams& params, const TrainConfig& cfg) {
  fs::create_directories(dir);
  const std::vector<double> flat = params.flatten();
  const std::vector<float> values(flat.begin(), flat.end());
  write_float_array(dir / "model.bin", static_cast<std::uint32_t>(values.size()), 1, values);

  const nlohmann::json meta = {
      {"architecture", params.arch}, {"train_config", cfg}, {"seed", cfg.seed},
      {"parameter_count", values.size()}, {"weights", "model.bin"},
  };
  std::ofstream os(dir / "model.json", std::ios::trunc);
  if (!os) throw Error("cannot write " + (dir / "model.json").string());
  os << meta.dump(2) << "\n";
}

StoredModel read_model(const fs::path& dir) {
  std::ifstream is(dir / "model.json");
  if (!is) throw MissingArtifact("missing model metadata: " + (dir / "model.json").string());
  StoredModel out;
  out.metadata = nlohmann::json::parse(is);
  const auto arch = out.metadata.at("architecture").get<Architecture>();
  const FloatArray arr = read_float_array(dir / out.metadata.at("weights").get<std::string>());
  if (arr.height != 1) throw ShapeError("model.bin must have height 1");
  const std::vector<double> flat(arr.values.begin(), arr.values.end());
  out.params = InferrerParams::unflatten(arch, flat);
  return out;
}

}  // namespace msl
