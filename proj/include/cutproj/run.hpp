// Command dispatch for the command-line tool.

#ifndef CUTPROJ_RUN_HPP_
#define CUTPROJ_RUN_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cutproj/config.hpp"

namespace cutproj {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_domain = 3,
  exit_tolerance = 4,
};

const std::vector<std::string>& command_names();

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides output.directory
  int workers = 1;
};

// Runs one command. Writes result files, prints a JSON summary to `out` and,
// on failure, an error JSON object to `err`. Returns the exit code.
int run_command(const std::string& command, const RunConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err);

// Parses the config file first; config problems exit with code 2.
int run_command_file(const std::string& command, const std::string& config_path,
                     const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace cutproj

#endif  // CUTPROJ_RUN_HPP_
