#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "becstate/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thermal Bogoliubov states and phase-space dynamics of Bose gases"};
  app.set_version_flag("--version", std::string("becstate ") + becstate::kVersion);
  app.require_subcommand(1);

  std::string config;
  becstate::RunOptions opts;
  std::uint64_t seed = 0;
  std::string out_dir, cache_dir;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config, "INI configuration file")->required();
    cmd->add_option("--seed", seed, "override thermal.seed");
    cmd->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
    cmd->add_option("--out-dir", out_dir, "override output.directory");
    cmd->add_option("--cache-dir", cache_dir, "directory for cached mode sets");
  };
  CLI::App* run = app.add_subcommand("run", "sample and evolve an ensemble, write observables");
  CLI::App* validate = app.add_subcommand("validate", "check a config and audit its stability");
  CLI::App* modes = app.add_subcommand("modes", "solve and print the mode set only");
  for (auto* cmd : {run, validate, modes}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) opts.seed = seed;
  if (chosen->count("--out-dir")) opts.out_dir = out_dir;
  if (chosen->count("--cache-dir")) opts.cache_dir = cache_dir;

  if (chosen == run) return becstate::run_command(config, opts, std::cout, std::cerr);
  if (chosen == validate) return becstate::validate_command(config, opts, std::cout, std::cerr);
  return becstate::modes_command(config, opts, std::cout, std::cerr);
}
