#include "msl/dataset_io.hpp"

#include <cstdio>
#include <fstream>

#include "msl/binary_io.hpp"

namespace msl {

namespace fs = std::filesystem;

namespace {

std::string sample_stem(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%05zu", k);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os << text;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifact("missing file: " + path.string());
  return nlohmann::json::parse(is);
}

}  // namespace

nlohmann::json points_to_json(const PointSet& points) {
  auto arr = nlohmann::json::array();
  for (const Point& p : points) arr.push_back({p.x, p.y});
  return arr;
}

PointSet points_from_json(const nlohmann::json& j) {
  PointSet out;
  for (const auto& pair : j) out.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
  return out;
}

void write_dataset(const fs::path& dir, const Dataset& ds, std::uint64_t seed, const nlohmann::json& config_echo) {
  if (ds.empty()) throw ConfigError("refusing to write an empty dataset");
  fs::create_directories(dir);
  const Shape shape = ds.samples.front().lattice.shape();

  nlohmann::json files = nlohmann::json::array();
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const Sample& s = ds.samples[k];
    if (s.lattice.shape() != shape) throw ShapeError("dataset samples must share one shape");
    const std::string stem = sample_stem(k);
    std::vector<float> values(s.lattice.values().begin(), s.lattice.values().end());
    write_float_array(dir / (stem + ".bin"), static_cast<std::uint32_t>(shape.width),
                      static_cast<std::uint32_t>(shape.height), values);
    write_text(dir / (stem + ".json"), points_to_json(s.truth).dump() + "\n");
    files.push_back({{"lattice", stem + ".bin"}, {"truth", stem + ".json"}});
  }

  nlohmann::json manifest = {
      {"width", shape.width}, {"height", shape.height}, {"N", ds.size()},
      {"seed", seed},         {"config", config_echo},  {"samples", files},
  };
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

StoredDataset read_dataset(const fs::path& dir) {
  StoredDataset out;
  out.manifest = read_json(dir / "manifest.json");
  const Shape shape{out.manifest.at("width").get<int>(), out.manifest.at("height").get<int>()};
  for (const auto& entry : out.manifest.at("samples")) {
    const FloatArray arr = read_float_array(dir / entry.at("lattice").get<std::string>());
    if (static_cast<int>(arr.width) != shape.width || static_cast<int>(arr.height) != shape.height)
      throw ShapeError("sample shape disagrees with manifest");
    Sample s{ImageLattice(shape, std::vector<double>(arr.values.begin(), arr.values.end())),
             points_from_json(read_json(dir / entry.at("truth").get<std::string>()))};
    out.data.samples.push_back(std::move(s));
  }
  if (out.data.size() != out.manifest.at("N").get<std::size_t>()) throw Error("manifest N disagrees with sample list");
  return out;
}

}  // namespace msl
