// Command-line front end: analyze, design, sample, reconstruct and verify
// generalized-sampling scenarios described by a single JSON file.

#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uvsamp/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generalized sampling on tensor products of unitary-orbit subspaces"};
  app.require_subcommand(1);

  uvsamp::CliOptions opts;
  double tolerance = -1.0;
  long long seed = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario file (JSON)")->required();
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--format", opts.format, "Summary format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "Override the scenario tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Override the scenario seed for random signals");
  };

  for (const char* name : {"analyze", "design", "sample", "reconstruct", "verify"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);

  if (tolerance >= 0.0) opts.tolerance = tolerance;
  if (seed >= 0) opts.seed = static_cast<unsigned long long>(seed);

  return uvsamp::run_command(app.get_subcommands().front()->get_name(), opts);
}
