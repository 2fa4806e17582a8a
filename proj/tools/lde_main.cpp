// lde: batch runner for difference-equation scenarios.
//
//   lde run <scenario.json>       trajectories, errors vs the direct recursion
//   lde validate <scenario.json>  schema and admissibility diagnostics only
//   lde sweep <scenario.json>     terminal error per epsilon
//
// Exit codes: 0 success, 1 usage, 2 schema error, 3 numerical breakdown, 4 I/O error.

#include <iostream>

#include "CLI11.hpp"
#include "lde/cli.hpp"

int main(int argc, char** argv) {
  using lde::cli::ExitCode;
  CLI::App app{"Linear difference equations: gauge decomposition, WKB and Riccati propagators"};
  app.require_subcommand(1);

  lde::cli::Options options;
  std::string scenario;
  std::string format;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::string output_dir;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "Scenario JSON file")->required();
    sub->add_option("--output-dir", output_dir, "Directory for output tables");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tolerance", tolerance, "Root residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for random coefficient models");
  };

  auto* run = app.add_subcommand("run", "Run every listed method and compare with the direct recursion");
  auto* validate = app.add_subcommand("validate", "Check a scenario without running solvers");
  auto* sweep = app.add_subcommand("sweep", "Terminal error per epsilon");
  add_common(run);
  add_common(validate);
  add_common(sweep);
  sweep->add_option("--eps", options.epsilons, "Epsilon values, replacing the scenario's list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  for (auto* sub : {run, validate, sweep}) {
    if (sub->count("--output-dir")) options.output_dir = output_dir;
    if (sub->count("--format")) options.format = format;
    if (sub->count("--tolerance")) options.tolerance = tolerance;
    if (sub->count("--seed")) options.seed = seed;
  }

  ExitCode code = ExitCode::Ok;
  if (*run) code = lde::cli::run(scenario, options, std::cout, std::cerr);
  if (*validate) code = lde::cli::validate(scenario, options, std::cout, std::cerr);
  if (*sweep) code = lde::cli::sweep(scenario, options, std::cout, std::cerr);
  return static_cast<int>(code);
}
