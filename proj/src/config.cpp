#include "msl/config.hpp"

#include <fstream>
#include <string>

#include "msl/random.hpp"

namespace msl {

namespace {

using nlohmann::json;

const json& section(const json& root, const char* name) {
  if (!root.contains(name)) throw ConfigError(std::string("missing field \"") + name + "\"");
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError(std::string("field \"") + name + "\" must be an object");
  return s;
}

template <class T>
T field(const json& obj, const std::string& prefix, const char* key) {
  const std::string name = prefix.empty() ? key : prefix + "." + key;
  if (!obj.contains(key)) throw ConfigError("missing field \"" + name + "\"");
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError("field \"" + name + "\" must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError("field \"" + name + "\" must be an integer");
    if (std::is_unsigned_v<T> && !v.is_number_unsigned())
      throw ConfigError("field \"" + name + "\" must be a non-negative integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("field \"" + name + "\" must be a number");
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!v.is_array()) throw ConfigError("field \"" + name + "\" must be an array of numbers");
    for (const json& e : v)
      if (!e.is_number()) throw ConfigError("field \"" + name + "\" must be an array of numbers");
  }
  return v.get<T>();
}

}  // namespace

DecoderSpace ExperimentConfig::decoder_space() const {
  return decoder_grid(decoder_sigmas, radius_multiplier, include_careless);
}

EncoderSpace ExperimentConfig::encoder_space() const { return encoder_grid(thresholds, separations); }

std::uint64_t ExperimentConfig::split_seed() const { return derive_seed(seed, stream::kSplit); }

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.seed = field<std::uint64_t>(j, "", "seed");

  const json& s = section(j, "synth");
  cfg.synth.width = field<int>(s, "synth", "width");
  cfg.synth.height = field<int>(s, "synth", "height");
  cfg.synth.blob_count_min = field<int>(s, "synth", "blob_count_min");
  cfg.synth.blob_count_max = field<int>(s, "synth", "blob_count_max");
  cfg.synth.blob_amplitude = field<double>(s, "synth", "blob_amplitude");
  cfg.synth.blob_radius = field<double>(s, "synth", "blob_radius");
  cfg.synth.min_separation = field<double>(s, "synth", "min_separation");
  cfg.synth.noise_std = field<double>(s, "synth", "noise_std");
  cfg.synth.seed = cfg.seed;
  cfg.synth.validate();
  cfg.n = field<std::size_t>(s, "synth", "n");
  if (cfg.n < 1) throw ConfigError("field \"synth.n\" must be >= 1");
  const auto fr = field<std::vector<double>>(s, "synth", "split");
  if (fr.size() != 3) throw ConfigError("field \"synth.split\" must hold [train, val, test]");
  cfg.split = {fr[0], fr[1], fr[2]};
  cfg.split.validate();

  const json& d = section(j, "decoder");
  cfg.decoder_sigmas = field<std::vector<double>>(d, "decoder", "sigmas");
  cfg.radius_multiplier = field<double>(d, "decoder", "radius_multiplier");
  cfg.include_careless = d.contains("include_careless") ? field<bool>(d, "decoder", "include_careless") : false;
  cfg.decoder_space();

  const json& inf = section(j, "inferrer");
  cfg.arch.context_radius = field<int>(inf, "inferrer", "context_radius");
  cfg.arch.hidden_units = field<int>(inf, "inferrer", "hidden_units");
  cfg.arch.validate();
  cfg.train.epochs = field<int>(inf, "inferrer", "epochs");
  cfg.train.learning_rate = field<double>(inf, "inferrer", "learning_rate");
  cfg.train.batch_pixels = field<int>(inf, "inferrer", "batch_pixels");
  cfg.train.seed = derive_seed(cfg.seed, stream::kTrain);
  cfg.train.validate();

  const json& e = section(j, "encoder");
  cfg.thresholds = field<std::vector<double>>(e, "encoder", "thresholds");
  cfg.separations = field<std::vector<double>>(e, "encoder", "separations");
  cfg.encoder_space();

  const json& m = section(j, "metrics");
  cfg.tau = field<double>(m, "metrics", "tau");
  if (!(cfg.tau > 0.0)) throw ConfigError("field \"metrics.tau\" must be > 0");

  if (j.contains("data_dir")) cfg.data_dir = j.at("data_dir").get<std::string>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_echo(const ExperimentConfig& cfg) {
  json j = {
      {"seed", cfg.seed},
      {"synth",
       {{"width", cfg.synth.width},
        {"height", cfg.synth.height},
        {"blob_count_min", cfg.synth.blob_count_min},
        {"blob_count_max", cfg.synth.blob_count_max},
        {"blob_amplitude", cfg.synth.blob_amplitude},
        {"blob_radius", cfg.synth.blob_radius},
        {"min_separation", cfg.synth.min_separation},
        {"noise_std", cfg.synth.noise_std},
        {"n", cfg.n},
        {"split", {cfg.split.train, cfg.split.val, cfg.split.test}}}},
      {"decoder",
       {{"sigmas", cfg.decoder_sigmas},
        {"radius_multiplier", cfg.radius_multiplier},
        {"include_careless", cfg.include_careless}}},
      {"inferrer",
       {{"context_radius", cfg.arch.context_radius},
        {"hidden_units", cfg.arch.hidden_units},
        {"epochs", cfg.train.epochs},
        {"learning_rate", cfg.train.learning_rate},
        {"batch_pixels", cfg.train.batch_pixels}}},
      {"encoder", {{"thresholds", cfg.thresholds}, {"separations", cfg.separations}}},
      {"metrics", {{"tau", cfg.tau}}},
  };
  return j;
}

}  // namespace msl
