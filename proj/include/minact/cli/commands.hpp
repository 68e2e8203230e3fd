#pragma once

#include <iosfwd>
#include <string>

#include "minact/cli/config.hpp"

namespace minact::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfigError = 2, kSolverFailure = 3 };

/// Runs one subcommand on an already-loaded config (overrides applied) and
/// writes its artifacts plus manifest.json into out_dir.
int run_command(const std::string& command, json config, const std::string& out_dir, std::ostream& log,
                std::ostream& err);

/// Full command line: minact <command> --config FILE [--out DIR] [--seed N] [--set k=v]...
int run_cli(int argc, char** argv);

}  // namespace minact::cli
