// simulate <experiment> --config <file> [--seed S] [--out dir] [--paper-scale] [--trials N] [--print-config]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rislab/rislab.hpp"

namespace {

int exit_code(const rislab::Error& e) {
  switch (e.kind()) {
    case rislab::ErrorKind::Validation: return 2;
    case rislab::ErrorKind::Numerical: return 3;
    case rislab::ErrorKind::Io: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided secure downlink simulator"};
  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  bool paper_scale = false;
  std::size_t trials = 0;
  bool print_config = false;

  std::string names;
  for (const auto& n : rislab::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "one of: " + names)->required();
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_flag("--paper-scale", paper_scale, "M = 128, N = 14 x 14");
  auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo blocks per grid point (0 disables)");
  app.add_flag("--print-config", print_config, "print the resolved config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    rislab::ExperimentConfig cfg = rislab::ExperimentConfig::desk_scale();
    if (!config_path.empty()) cfg = rislab::load_config(config_path, cfg);
    if (paper_scale) cfg.apply_paper_scale();
    if (*seed_opt) cfg.seed = seed;
    if (*trials_opt) {
      cfg.trials = trials;
      if (trials > 0 && static_cast<std::size_t>(cfg.batches) > trials) cfg.batches = static_cast<int>(trials);
    }
    if (print_config) {
      std::cout << rislab::to_json(cfg).dump(2) << "\n";
      return 0;
    }

    const auto start = std::chrono::steady_clock::now();
    const rislab::ResultTable table = rislab::run_experiment(experiment, cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path dir = std::filesystem::path(out_dir) / experiment;
    const std::string csv_name = experiment + ".csv";
    rislab::emit_csv(table, dir / csv_name);
    rislab::write_atomic(dir / "manifest.json",
                         rislab::manifest(experiment, cfg, table, csv_name, wall).dump(2) + "\n");
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << (dir / csv_name).string() << "\n";
    return 0;
  } catch (const rislab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
