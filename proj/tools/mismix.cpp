/*
   Copyright 2026 The mismix Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mismix/error.hpp"
#include "mismix/experiments.hpp"
#include "mismix/sweep_config.hpp"

int main(int argc, char** argv) {
  using namespace mismix;
  CLI::App app{"Gaussian-mixture mean estimation under variance misspecification: experiment sweeps"};
  app.require_subcommand(0, 1);

  std::string experiment;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  bool resume = false;
  bool quiet = false;
  bool print_defaults = false;

  app.add_option("experiment", experiment, "phase-diagram | mse-vs-sigma | clustering-vs-snr | ha-vs-theory")
      ->required()
      ->check(CLI::IsMember({"phase-diagram", "mse-vs-sigma", "clustering-vs-snr", "ha-vs-theory"}));
  app.add_option("--config", config, "JSON sweep config; missing keys take the experiment defaults")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--workers", workers, "parallel cells (overrides the config and MISMIX_WORKERS)");
  app.add_option("--out", out_dir, "output directory")->default_val("out");
  app.add_flag("--resume", resume, "reuse cached cells from a previous run with the same config");
  app.add_flag("-q,--quiet", quiet, "no progress output");
  app.add_flag("--print-config", print_defaults, "print the effective config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    const Experiment e = parse_experiment(experiment);
    SweepSpec spec = config.empty() ? default_spec(e) : load_spec(config);
    if (spec.experiment != e)
      throw InvalidArgument("config is for '" + to_string(spec.experiment) + "', not '" + experiment + "'");
    if (seed) spec.master_seed = *seed;
    if (workers) spec.workers = *workers;
    validate(spec);

    if (print_defaults) {
      std::cout << to_json(spec).dump(2) << '\n';
      return 0;
    }

    RunOptions options;
    options.out_dir = out_dir;
    options.resume = resume;
    options.progress = !quiet;
    const SweepGrid grid = run_experiment(spec, options);
    aggregate_and_write(grid, out_dir);
    if (!quiet)
      std::cerr << "wrote " << grid.cells.size() << " cells to " << out_dir << " in " << grid.wall_seconds << " s\n";
  } catch (const std::exception& ex) {
    std::cerr << "mismix: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
