// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdnsim/cli.hpp"
#include "cdnsim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"energy-accounting CDN delivery simulator"};
  app.set_version_flag("--version", cdnsim::kVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  auto* validate =
      app.add_subcommand("validate", "check a scenario document");
  validate->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();

  cdnsim::SimulateArgs sim;
  std::uint64_t seed_value = 0;
  auto* simulate =
      app.add_subcommand("simulate", "run one simulation and write reports");
  simulate->add_option("scenario", sim.scenario_path, "scenario JSON file")
      ->required();
  auto* seed_opt = simulate->add_option(
      "--seed", seed_value, "override the document's simulation.seed");
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_flag("--requests-csv", sim.requests_csv,
                     "also write the per-request audit CSV");

  cdnsim::SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "run a parameter sweep across values and seeds");
  sweep_cmd->add_option("scenario", sweep.scenario_path, "scenario JSON file")
      ->required();
  sweep_cmd
      ->add_option("--param", sweep.param_path,
                   "dotted path of the scenario field to sweep")
      ->required();
  sweep_cmd
      ->add_option("--values", sweep.values,
                   "comma-separated list of values to assign")
      ->required()
      ->delimiter(',');
  sweep_cmd
      ->add_option("--seeds", sweep.seeds, "comma-separated list of seeds")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out_dir, "output directory")->required();
  sweep_cmd->add_option("--jobs", sweep.jobs,
                        "worker threads (default: number of processors)");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed())
    return cdnsim::cmd_validate(scenario_path, std::cout, std::cerr);
  if (simulate->parsed()) {
    if (seed_opt->count() > 0) sim.seed = seed_value;
    return cdnsim::cmd_simulate(sim, std::cout, std::cerr);
  }
  return cdnsim::cmd_sweep(sweep, std::cout, std::cerr);
}
