#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "hvqm/evolution.hpp"
#include "hvqm/stats.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hvqm: hidden-variable quantum measurement toolkit.\n"
      "Runs the broadening / modified-Born / Stern-Gerlach pipelines as "
      "reproducible batch jobs with CSV output."};
  app.set_help_flag("--help", "print usage");

  std::string command, config_path;
  app.add_option("--command", command,
                 "one of: profile moments born simulate sg evolve-check "
                 "limit bound");
  app.add_option("--config", config_path,
                 "flat key = value config file (a serialized resolved "
                 "config replays a run exactly)");

  // flag -> config key; values are applied over file values over defaults
  const std::map<std::string, std::string> flag_keys = {
      {"--out", "out"},           {"--seed", "seed"},
      {"--hbar", "hbar"},         {"--sigma", "sigma"},
      {"--family", "family"},     {"--l", "l"},
      {"--levels", "levels"},     {"--amps", "amps"},
      {"--weights", "weights"},   {"--g", "g"},
      {"--t", "t"},               {"--mu", "mu"},
      {"--T", "T"},               {"--m-a", "m_a"},
      {"--sigma0", "sigma0"},     {"--n-events", "n_events"},
      {"--workers", "workers"},   {"--n-grid", "n_grid"},
      {"--dt", "dt"},             {"--speed", "speed"},
      {"--refinements", "refinements"}, {"--sigmas", "sigmas"},
      {"--delta-l", "delta_l"},   {"--lambda", "lambda"},
      {"--dump-density", "dump_density"},
  };
  std::map<std::string, std::string> flag_values;
  for (const auto& [flag, key] : flag_keys) {
    app.add_option(flag, flag_values[key], "sets config key '" + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (command.empty() && !config_path.empty()) {
      command = hvqm::cli::RunConfig::peek_command(config_path);
    }
    if (command.empty()) {
      std::cerr << "error: no command given (use --command or --config)\n";
      return kExitInvalidInput;
    }

    auto cfg = hvqm::cli::RunConfig::defaults_for(command);
    if (!config_path.empty()) cfg.merge_file(config_path);
    for (const auto& [flag, key] : flag_keys) {
      const std::string option_name = flag;
      if (app.count(option_name) > 0) cfg.set(key, flag_values[key]);
    }

    hvqm::cli::run_command(cfg, std::cout);
    return 0;
  } catch (const hvqm::stats::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const hvqm::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
}
