#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "msl/commands.hpp"

int main(int argc, char** argv) {
  msl::configure_logging();
  CLI::App app{"Moderately supervised point detection: generate, learn, loop, test, report"};
  app.set_version_flag("--version", std::string("msl ") + msl::kVersion);
  app.require_subcommand(1);

  msl::CliOptions opts;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset directory");
  gen->add_option("--config", opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", opts.out, "Dataset directory to write");

  auto* learn = app.add_subcommand("learn", "Learn under one decoder setting");
  learn->add_option("--config", opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  learn->add_option("--data", opts.data, "Dataset directory");
  learn->add_option("--out", opts.out, "Run directory to write");
  learn->add_option("--decoder", opts.decoder, "careless | careful:SIGMA");

  auto* loop = app.add_subcommand("loop", "Learn under every decoder candidate and select the best");
  loop->add_option("--config", opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  loop->add_option("--data", opts.data, "Dataset directory");
  loop->add_option("--out", opts.out, "Run directory to write");
  loop->add_option("--workers", opts.workers, "Candidates evaluated concurrently")->check(CLI::PositiveNumber);

  auto* test = app.add_subcommand("test", "Evaluate a run's selected solution on the test split");
  test->add_option("--run", opts.run, "Run directory")->required();
  test->add_option("--data", opts.data, "Dataset directory")->required();

  auto* report = app.add_subcommand("report", "Summarise a run's candidate table");
  report->add_option("--run", opts.run, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      std::cout << msl::cmd_gen(opts).string() << "\n";
    } else if (learn->parsed()) {
      std::cout << msl::cmd_learn(opts).string() << "\n";
    } else if (loop->parsed()) {
      std::cout << msl::cmd_loop(opts).string() << "\n";
    } else if (test->parsed()) {
      std::cout << msl::cmd_test(opts).string() << "\n";
    } else if (report->parsed()) {
      msl::cmd_report(opts, std::cout);
    }
  } catch (const msl::DivergenceError& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const msl::ConfigError& e) {
    spdlog::error("invalid configuration: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
