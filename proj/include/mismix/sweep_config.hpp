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
#include <string>
#include <vector>

#include <json.hpp>

#include "mismix/core_model.hpp"

namespace mismix {

inline constexpr int kSchemaVersion = 1;

enum class Experiment { PhaseDiagram, MseVsSigma, ClusteringVsSnr, HaVsTheory };
enum class AxisScale { Linear, Log };
enum class ModelPreset { SymmetricK2, Simplex, RandomGaussian, CustomCsv };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

struct Axis {
  std::string name;
  AxisScale scale = AxisScale::Log;
  double min = 1.0;
  double max = 1.0;
  int points = 2;
  /// When nonempty, used verbatim instead of (scale, min, max, points).
  std::vector<double> explicit_values;

  std::vector<double> values() const;
};

/// Everything needed to reproduce one sweep. Serialized as a flat JSON
/// object (see README for the key list).
struct SweepSpec {
  int schema_version = kSchemaVersion;
  Experiment experiment = Experiment::PhaseDiagram;
  std::vector<Axis> axes;
  std::vector<std::size_t> n_list;
  int trials = 1;
  std::uint64_t master_seed = 0;
  ModelPreset preset = ModelPreset::SymmetricK2;
  int K = 2;
  int d = 1;
  /// Simplex scale.
  double beta = 1.0;
  /// ||mu|| for the symmetric two-component preset.
  double mu_norm = 1.0;
  std::string means_csv;
  int workers = 0;

  // Population minimizer settings (phase diagram).
  int max_iters = 5000;
  double tol = 0.0;
  std::size_t mc_samples = 1'000'000;
  int quadrature_nodes = 256;

  // Finite-sample estimator settings.
  int em_max_iters = 300;
  int lloyd_max_iters = 100;
  double em_tol = 1e-10;
};

/// Defaults for one experiment, including its grid.
SweepSpec default_spec(Experiment e);

nlohmann::json to_json(const SweepSpec& spec);
/// Reads a config document. Keys absent from `doc` keep the experiment's
/// defaults. Also accepts a run manifest (the spec under "spec").
SweepSpec spec_from_json(const nlohmann::json& doc);
SweepSpec load_spec(const std::filesystem::path& path);

/// Throws InvalidArgument on an inconsistent spec.
void validate(const SweepSpec& spec);

/// Ground-truth means for the spec's preset.
MeanConfig preset_means(const SweepSpec& spec);

}  // namespace mismix
