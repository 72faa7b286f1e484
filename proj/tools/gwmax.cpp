// gwmax <solve|mc|asym|compare> <config.yaml> [--output PATH] [--seed N] [--threads N]

#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Tail of the maximal mark on critical Galton-Watson trees"};
  std::string command, config_path;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  app.add_option("command", command, "solve, mc, asym or compare")
      ->required()
      ->check(CLI::IsMember({"solve", "mc", "asym", "compare"}));
  app.add_option("config", config_path, "YAML run configuration")->required();
  app.add_option("--output", output, "CSV destination (default: config 'output', else stdout)");
  app.add_option("--seed", seed, "Monte Carlo seed, overrides mc.seed");
  app.add_option("--threads", threads, "worker count, overrides 'threads'")->check(CLI::Range(1u, 1024u));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto cfg = gwmax::cli::load_config(config_path);
    if (output) cfg.output = output;
    if (threads) cfg.threads = *threads;
    if (seed) {
      if (!cfg.mc) cfg.mc = gwmax::cli::McSettings{};
      cfg.mc->seed = seed;
    }
    std::string csv = gwmax::cli::run_command(command, cfg);
    if (cfg.output) {
      std::ofstream file(*cfg.output, std::ios::binary);
      if (!file) throw gwmax::ConfigError("output: cannot open '" + *cfg.output + "' for writing");
      file << csv;
      if (!file) throw gwmax::ConfigError("output: write to '" + *cfg.output + "' failed");
    } else {
      std::cout << csv;
    }
  } catch (const gwmax::NumericalError& e) {
    std::cerr << "gwmax: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const gwmax::ConfigError& e) {
    std::cerr << "gwmax: config error: " << e.what() << "\n";
    return 2;
  } catch (const gwmax::DomainError& e) {
    std::cerr << "gwmax: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gwmax: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
