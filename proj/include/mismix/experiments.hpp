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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mismix/sweep_config.hpp"

namespace mismix {

struct Metric {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_trials = 1;
};

struct CellResult {
  std::vector<std::size_t> index;
  std::vector<double> coords;
  std::vector<Metric> metrics;
  std::uint64_t seed = 0;
  /// Semicolon-separated flags such as "nonconverged"; empty when clean.
  std::string flags;

  const Metric* find(const std::string& name) const;
  double value(const std::string& name) const;
};

struct SweepGrid {
  SweepSpec spec;
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axis_values;
  /// Sorted lexicographically by index.
  std::vector<CellResult> cells;
  double wall_seconds = 0.0;
};

struct RunOptions {
  /// When set, finished cells are cached under out_dir/cells.
  std::filesystem::path out_dir;
  /// Reuse cached cells whose spec fingerprint matches.
  bool resume = false;
  /// Progress lines on stderr.
  bool progress = false;
  /// Overrides spec.workers when positive.
  int workers = 0;
};

/// Grid axes of an experiment; mse-vs-sigma adds the sample size axis "n".
std::vector<std::pair<std::string, std::vector<double>>> grid_axes(const SweepSpec& spec);

/// Noise level that gives `snr` for fixed means.
double sigma_for_snr(const MeanConfig& means, double snr);

SweepGrid run_phase_diagram(const SweepSpec& spec, const RunOptions& options = {});
SweepGrid run_mse_vs_sigma(const SweepSpec& spec, const RunOptions& options = {});
SweepGrid run_clustering_vs_snr(const SweepSpec& spec, const RunOptions& options = {});
SweepGrid run_ha_vs_theory(const SweepSpec& spec, const RunOptions& options = {});
SweepGrid run_experiment(const SweepSpec& spec, const RunOptions& options = {});

/// Single cells, exposed for tests and ad-hoc use.
CellResult phase_diagram_cell(const SweepSpec& spec, double snr, double rho_sq, std::uint64_t seed);
CellResult mse_vs_sigma_cell(const SweepSpec& spec, double sigma_sq, std::size_t n, std::uint64_t seed);
CellResult clustering_cell(const SweepSpec& spec, double snr, std::uint64_t seed);
CellResult ha_vs_theory_cell(const SweepSpec& spec, double snr, std::uint64_t seed);

/// Long-format CSV, one row per cell per metric.
void write_results_csv(std::ostream& out, const SweepGrid& grid);
/// Wide per-cell theory overlay (collapse threshold, closed forms, bounds).
void write_theory_csv(std::ostream& out, const SweepGrid& grid);

/// Writes results.csv, manifest.json, theory.csv and plot.gp into `dir`.
void aggregate_and_write(const SweepGrid& grid, const std::filesystem::path& dir);

/// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace mismix
