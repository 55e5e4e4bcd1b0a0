#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace hvqm::cli {

// Canonicalizes the config, runs the requested command, writes the CSV to
// cfg["out"] and the resolved config to cfg["out"] + ".config", and prints a
// one-line summary. Throws std::invalid_argument for bad parameters and
// SolverError/QuadratureError for numerical failures.
void run_command(RunConfig& cfg, std::ostream& summary);

}  // namespace hvqm::cli
