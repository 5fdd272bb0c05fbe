#include "msl/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>

#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "msl/dataset_io.hpp"
#include "msl/model_io.hpp"

namespace msl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os << text;
  if (!os) throw Error("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifact("missing artifact: " + path.string());
  return json::parse(is);
}

std::string candidate_dir(std::size_t index) { return fmt::format("candidate_{:03}", index); }

fs::path resolve_out(const CliOptions& opts, const ExperimentConfig& cfg) {
  if (!opts.out.empty()) return opts.out;
  if (cfg.output_dir) return *cfg.output_dir;
  throw ConfigError("no output directory: pass --out or set \"output_dir\"");
}

fs::path resolve_data(const CliOptions& opts, const ExperimentConfig* cfg) {
  if (!opts.data.empty()) return opts.data;
  if (cfg && cfg->data_dir) return *cfg->data_dir;
  throw ConfigError("no dataset directory: pass --data or set \"data_dir\"");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_encoder_table(const fs::path& path, const EncoderFit& fit) {
  std::string csv = "threshold,min_separation,mean_loss\n";
  for (std::size_t c = 0; c < fit.candidates.size(); ++c)
    csv += fmt::format("{},{},{}\n", fit.candidates[c].threshold, fit.candidates[c].min_separation,
                       fit.mean_losses[c]);
  write_text(path, csv);
}

void write_trace(const fs::path& path, const TrainTrace& trace) {
  std::string csv = "epoch,mean_loss\n";
  for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e) csv += fmt::format("{},{}\n", e, trace.epoch_loss[e]);
  write_text(path, csv);
}

LoopResult single_entry(LearnedSolution sol, double seconds) {
  LoopResult r;
  LoopEntry e;
  e.decoder = sol.decoder;
  e.ok = true;
  e.validation_loss = sol.validation.loss;
  e.seconds = seconds;
  e.solution = std::move(sol);
  r.table.push_back(std::move(e));
  r.selected = 0;
  return r;
}

struct RunInputs {
  ExperimentConfig cfg;
  Splits splits;
  fs::path out;
};

RunInputs prepare_run(const CliOptions& opts) {
  RunInputs in{load_config(opts.config), {}, {}};
  in.out = resolve_out(opts, in.cfg);
  const fs::path data = resolve_data(opts, &in.cfg);
  in.splits = load_splits(data);
  spdlog::info("dataset {}: train {}, val {}, test {}", data.string(), in.splits.train.size(), in.splits.val.size(),
               in.splits.test.size());
  return in;
}

}  // namespace

DecoderParams parse_decoder_override(const std::string& text, double radius_multiplier) {
  if (text == "careless") return DecoderParams::careless();
  const std::string prefix = "careful:";
  if (text.rfind(prefix, 0) == 0) {
    double sigma = 0.0;
    try {
      std::size_t used = 0;
      sigma = std::stod(text.substr(prefix.size()), &used);
      if (used != text.size() - prefix.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError("--decoder: cannot parse sigma in \"" + text + "\"");
    }
    auto p = DecoderParams::careful(sigma, radius_multiplier * sigma);
    p.validate();
    return p;
  }
  throw ConfigError("--decoder must be \"careless\" or \"careful:SIGMA\"");
}

Splits load_splits(const fs::path& data_dir) {
  StoredDataset stored = read_dataset(data_dir);
  const ExperimentConfig gen_cfg = parse_config(stored.manifest.at("config"));
  return split(stored.data, gen_cfg.split, gen_cfg.split_seed());
}

void write_run(const fs::path& run_dir, const std::string& kind, const json& config, const LoopResult& result,
               double total_seconds) {
  fs::create_directories(run_dir);
  std::vector<std::string> paths{"results.json", "manifest.json"};
  json rows = json::array();
  for (std::size_t c = 0; c < result.table.size(); ++c) {
    const LoopEntry& e = result.table[c];
    json row = {{"index", c}, {"decoder", e.decoder}, {"status", e.ok ? "ok" : "failed"}, {"seconds", e.seconds}};
    if (!e.ok) {
      row["error"] = e.error;
      rows.push_back(row);
      continue;
    }
    const LearnedSolution& sol = *e.solution;
    const std::string dir = candidate_dir(c);
    write_model(run_dir / dir, sol.inferrer, sol.train_config);
    write_text(run_dir / dir / "encoder.json", json(sol.encoder).dump(2) + "\n");
    write_encoder_table(run_dir / dir / "encoder_table.csv", sol.encoder_fit);
    write_trace(run_dir / dir / "trace.csv", sol.trace);
    for (const char* f : {"model.json", "model.bin", "encoder.json", "encoder_table.csv", "trace.csv"})
      paths.push_back(dir + "/" + f);
    row["validation_loss"] = e.validation_loss;
    row["validation_report"] = sol.validation;
    row["encoder"] = sol.encoder;
    row["model"] = dir;
    row["train_seed"] = sol.train_config.seed;
    row["final_epoch_loss"] = sol.trace.epoch_loss.empty() ? 0.0 : sol.trace.epoch_loss.back();
    rows.push_back(row);
  }
  const LoopEntry& sel = result.table.at(result.selected);
  const json results = {
      {"kind", kind},
      {"config", config},
      {"candidates", rows},
      {"selected",
       {{"index", result.selected},
        {"decoder", sel.decoder},
        {"encoder", sel.solution->encoder},
        {"model", candidate_dir(result.selected)},
        {"validation_loss", sel.validation_loss}}},
  };
  write_text(run_dir / "results.json", results.dump(2) + "\n");

  const json manifest = {
      {"version", kVersion}, {"created_utc", utc_timestamp()}, {"config", config},
      {"paths", paths},      {"timings", {{"total_seconds", total_seconds}}},
  };
  write_text(run_dir / "manifest.json", manifest.dump(2) + "\n");
}

fs::path cmd_gen(const CliOptions& opts) {
  const ExperimentConfig cfg = load_config(opts.config);
  const fs::path out = resolve_out(opts, cfg);
  const Dataset ds = generate_dataset(cfg.synth, cfg.n);
  write_dataset(out, ds, cfg.seed, config_echo(cfg));
  spdlog::info("wrote {} samples to {}", ds.size(), out.string());
  return out;
}

fs::path cmd_learn(const CliOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RunInputs in = prepare_run(opts);
  const DecoderParams decoder = opts.decoder.empty() ? in.cfg.decoder_space().candidates.front()
                                                     : parse_decoder_override(opts.decoder, in.cfg.radius_multiplier);
  LearnedSolution sol = learn(in.splits.train, in.splits.val, decoder, in.cfg.arch, in.cfg.train,
                              in.cfg.encoder_space(), in.cfg.tau);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("validation F1 {:.4f}", sol.validation.f1);
  write_run(in.out, "learn", config_echo(in.cfg), single_entry(std::move(sol), seconds), seconds);
  return in.out;
}

fs::path cmd_loop(const CliOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RunInputs in = prepare_run(opts);
  const LoopResult result = loop(in.splits.train, in.splits.val, in.cfg.decoder_space(), in.cfg.arch, in.cfg.train,
                                 in.cfg.encoder_space(), in.cfg.tau, opts.workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("selected candidate {} (validation loss {:.4f})", result.selected,
               result.table[result.selected].validation_loss);
  write_run(in.out, "loop", config_echo(in.cfg), result, seconds);
  return in.out;
}

fs::path cmd_test(const CliOptions& opts) {
  if (opts.run.empty()) throw ConfigError("test needs --run");
  const json results = read_json(opts.run / "results.json");
  const json& selected = results.at("selected");
  const StoredModel model = read_model(opts.run / selected.at("model").get<std::string>());
  const auto encoder = selected.at("encoder").get<EncoderParams>();
  const double tau = results.at("config").at("metrics").at("tau").get<double>();

  const Splits splits = load_splits(resolve_data(opts, nullptr));
  const std::uint64_t decoder_calls = decoder_invocations();
  const DetectionReport rep = test(splits.test, model.params, encoder, tau);
  if (decoder_invocations() != decoder_calls) throw Error("testing path invoked the decoder");

  const fs::path out = opts.run / "test_report.json";
  write_text(out, json(rep).dump(2) + "\n");
  spdlog::info("test F1 {:.4f} (P {:.4f}, R {:.4f})", rep.f1, rep.precision, rep.recall);
  return out;
}

fs::path cmd_report(const CliOptions& opts, std::ostream& out) {
  if (opts.run.empty()) throw ConfigError("report needs --run");
  const json results = read_json(opts.run / "results.json");
  std::vector<json> rows(results.at("candidates").begin(), results.at("candidates").end());
  std::stable_sort(rows.begin(), rows.end(), [](const json& a, const json& b) {
    const bool ok_a = a.at("status") == "ok", ok_b = b.at("status") == "ok";
    if (ok_a != ok_b) return ok_a;
    return ok_a && a.at("validation_loss").get<double>() < b.at("validation_loss").get<double>();
  });

  std::string csv = "index,variant,sigma,radius,status,validation_loss,validation_f1,threshold,min_separation\n";
  out << fmt::format("{} run: {} candidate(s), selected #{}\n", results.at("kind").get<std::string>(), rows.size(),
                     results.at("selected").at("index").get<std::size_t>());
  out << fmt::format("{:>5}  {:<9} {:>7} {:>7}  {:<6} {:>9} {:>7} {:>9} {:>7}\n", "index", "variant", "sigma", "radius",
                     "status", "val_loss", "val_f1", "threshold", "min_sep");
  for (const json& r : rows) {
    const json& d = r.at("decoder");
    const bool ok = r.at("status") == "ok";
    const double loss = ok ? r.at("validation_loss").get<double>() : 1.0;
    const double f1 = ok ? r.at("validation_report").at("f1").get<double>() : 0.0;
    const double h = ok ? r.at("encoder").at("threshold").get<double>() : 0.0;
    const double delta = ok ? r.at("encoder").at("min_separation").get<double>() : 0.0;
    out << fmt::format("{:>5}  {:<9} {:>7.3f} {:>7.3f}  {:<6} {:>9.4f} {:>7.4f} {:>9.3f} {:>7.3f}\n",
                       r.at("index").get<std::size_t>(), d.at("variant").get<std::string>(), d.at("sigma").get<double>(),
                       d.at("radius").get<double>(), r.at("status").get<std::string>(), loss, f1, h, delta);
    csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.at("index").get<std::size_t>(),
                       d.at("variant").get<std::string>(), d.at("sigma").get<double>(), d.at("radius").get<double>(),
                       r.at("status").get<std::string>(), ok ? fmt::format("{}", loss) : "",
                       ok ? fmt::format("{}", f1) : "", ok ? fmt::format("{}", h) : "",
                       ok ? fmt::format("{}", delta) : "");
  }
  const fs::path csv_path = opts.run / "table.csv";
  write_text(csv_path, csv);
  return csv_path;
}

void configure_logging() {
  auto logger = spdlog::get("msl");
  if (!logger) logger = spdlog::stderr_color_mt("msl");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("MSL_LOG");
  const std::string value = level ? level : "info";
  if (value == "error") spdlog::set_level(spdlog::level::err);
  else if (value == "debug") spdlog::set_level(spdlog::level::debug);
  else spdlog::set_level(spdlog::level::info);
}

}  // namespace msl
