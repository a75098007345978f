#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "antiplane/cli_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"antiplane frictional contact solver with adhesion"};
  app.require_subcommand(1);

  std::string scenario;
  std::vector<std::string> axis_specs;

  auto* run = app.add_subcommand("run", "solve a scenario and write artifacts");
  run->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "validate a scenario without solving");
  check->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "solve over a parameter grid");
  sweep->add_option("scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis_specs, "key=v1,v2,... (repeat for a 2D grid)")
      ->required()
      ->expected(1, 2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return antiplane::run_command(scenario, std::cout);
    if (check->parsed()) return antiplane::check_command(scenario, std::cout);
    std::vector<antiplane::SweepAxis> axes;
    for (const auto& spec : axis_specs) axes.push_back(antiplane::parse_axis(spec));
    return antiplane::sweep_command(scenario, axes, std::cout);
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
}
