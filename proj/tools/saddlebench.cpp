#include "saddle/harness.hpp"

#include "CLI11.hpp"

#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"saddlebench: solver and experiment driver for structured saddle point problems"};
  app.require_subcommand(1);

  std::string solve_config;
  CLI::App* solve = app.add_subcommand("solve", "run the full solver on a config");
  solve->add_option("config", solve_config, "JSON config file")->required();

  std::string validate_config;
  CLI::App* validate =
      app.add_subcommand("validate", "check declared problem constants by sampling");
  validate->add_option("config", validate_config, "JSON config file")->required();

  std::string scaling_config, sweep;
  std::vector<double> grid;
  CLI::App* scaling = app.add_subcommand("scaling", "sweep a parameter and fit the scaling law");
  scaling->add_option("config", scaling_config, "JSON config file")->required();
  scaling->add_option("--sweep", sweep, "swept parameter: 'epsilon' or 'target_gap'")->required();
  scaling->add_option("--grid", grid, "comma separated positive values (>= 4)")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems share the config-error exit code
  }

  if (solve->parsed()) return saddle::cmd_solve(solve_config);
  if (validate->parsed()) return saddle::cmd_validate(validate_config);
  if (scaling->parsed()) return saddle::cmd_scaling(scaling_config, sweep, grid);
  return 1;
}
