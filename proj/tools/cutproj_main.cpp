// cutproj <command> --config <path> [--out <dir>] [--workers <n>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cutproj/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted cut-and-project combs: densities, autocorrelation, diffraction"};
  std::string command, config;
  cutproj::RunOptions options;
  std::string out_dir;

  app.add_option("command", command, "validate | generate | density | autocorr | diffract | "
                                     "fourier-bohr | almost-periods | injectivity | compare")
      ->required()
      ->check(CLI::IsMember(cutproj::command_names()));
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--workers", options.workers, "threads for the large sums")
      ->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cutproj::exit_config;
  }
  if (!out_dir.empty())
    options.out_dir = out_dir;
  return cutproj::run_command_file(command, config, options, std::cout, std::cerr);
}
