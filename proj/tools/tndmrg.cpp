#include "tn/contract.hpp"
#include "tn/run.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"tndmrg: dense tensor-network DMRG batch runner"};
  app.require_subcommand(1);

  auto *run_cmd = app.add_subcommand("run", "run a model configuration file");
  std::string config_path;
  std::string output_dir;
  long long seed = -1;
  bool verbose = false;
  run_cmd->add_option("config", config_path, "path to a key = value config")
      ->required();
  run_cmd->add_option("--output", output_dir,
                      "output directory (overrides the config)");
  run_cmd->add_option("--seed", seed, "random seed (overrides the config)");
  run_cmd->add_flag("--verbose", verbose, "log progress to stderr");

  CLI11_PARSE(app, argc, argv);

  if (const char *threads = std::getenv("TN_NUM_THREADS"))
    tn::set_kernel_threads(std::max(1, std::atoi(threads)));

  tn::RunConfig config;
  try {
    config = tn::parse_config_file(config_path);
  } catch (const tn::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return tn::kExitConfigError;
  }
  if (!output_dir.empty())
    config.output_dir = output_dir;
  if (seed >= 0)
    config.seed = static_cast<std::uint64_t>(seed);

  return tn::run_main(config, std::cerr, verbose);
}
