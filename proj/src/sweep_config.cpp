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

#include "mismix/sweep_config.hpp"

#include <cmath>
#include <fstream>

#include "mismix/error.hpp"
#include "mismix/population.hpp"
#include "mismix/random.hpp"

namespace mismix {

using nlohmann::json;

namespace {

struct Named {
  Experiment value;
  const char* name;
};
constexpr Named kExperiments[] = {
    {Experiment::PhaseDiagram, "phase-diagram"},
    {Experiment::MseVsSigma, "mse-vs-sigma"},
    {Experiment::ClusteringVsSnr, "clustering-vs-snr"},
    {Experiment::HaVsTheory, "ha-vs-theory"},
};

std::string preset_name(ModelPreset p) {
  switch (p) {
    case ModelPreset::SymmetricK2: return "symmetric-k2";
    case ModelPreset::Simplex: return "simplex";
    case ModelPreset::RandomGaussian: return "random-gaussian";
    case ModelPreset::CustomCsv: return "custom-csv";
  }
  return "?";
}

ModelPreset parse_preset(const std::string& name) {
  for (auto p : {ModelPreset::SymmetricK2, ModelPreset::Simplex, ModelPreset::RandomGaussian, ModelPreset::CustomCsv})
    if (preset_name(p) == name) return p;
  throw InvalidArgument("unknown model preset '" + name + "'");
}

Axis make_axis(std::string name, AxisScale scale, double lo, double hi, int points) {
  Axis a;
  a.name = std::move(name);
  a.scale = scale;
  a.min = lo;
  a.max = hi;
  a.points = points;
  return a;
}

Axis explicit_axis(std::string name, std::vector<double> values) {
  Axis a;
  a.name = std::move(name);
  a.points = static_cast<int>(values.size());
  a.explicit_values = std::move(values);
  return a;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& n : kExperiments)
    if (n.value == e) return n.name;
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& n : kExperiments)
    if (name == n.name) return n.value;
  throw InvalidArgument("unknown experiment '" + name + "'");
}

std::vector<double> Axis::values() const {
  if (!explicit_values.empty()) return explicit_values;
  if (points <= 0) return {};
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    if (scale == AxisScale::Log) {
      out[i] = std::pow(10.0, std::log10(min) + t * (std::log10(max) - std::log10(min)));
    } else {
      out[i] = min + t * (max - min);
    }
  }
  // Pin the endpoints exactly.
  out.front() = min;
  if (points > 1) out.back() = max;
  return out;
}

SweepSpec default_spec(Experiment e) {
  SweepSpec s;
  s.experiment = e;
  switch (e) {
    case Experiment::PhaseDiagram:
      s.axes = {make_axis("snr", AxisScale::Log, 1e-3, 1e2, 25),
                make_axis("rho_sq", AxisScale::Log, 1e-2, 1e2, 25)};
      break;
    case Experiment::MseVsSigma:
      s.d = 8;
      s.trials = 10;
      s.axes = {make_axis("sigma_sq", AxisScale::Log, 1e-2, 1e2, 9)};
      s.n_list = {10'000, 100'000};
      break;
    case Experiment::ClusteringVsSnr:
      s.axes = {make_axis("snr", AxisScale::Log, 1e-4, 25.0, 13)};
      s.n_list = {1'000'000};
      break;
    case Experiment::HaVsTheory:
      s.trials = 5;
      s.axes = {make_axis("snr", AxisScale::Log, 1e-3, 25.0, 12)};
      s.n_list = {1'000'000};
      break;
  }
  return s;
}

json to_json(const SweepSpec& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["experiment"] = to_string(s.experiment);
  for (std::size_t a = 0; a < s.axes.size(); ++a) {
    const Axis& ax = s.axes[a];
    const std::string p = "axis" + std::to_string(a) + "_";
    j[p + "name"] = ax.name;
    if (!ax.explicit_values.empty()) {
      j[p + "values"] = ax.explicit_values;
    } else {
      j[p + "scale"] = ax.scale == AxisScale::Log ? "log" : "linear";
      j[p + "min"] = ax.min;
      j[p + "max"] = ax.max;
      j[p + "points"] = ax.points;
    }
  }
  j["n_list"] = s.n_list;
  j["trials"] = s.trials;
  j["master_seed"] = s.master_seed;
  j["preset"] = preset_name(s.preset);
  j["K"] = s.K;
  j["d"] = s.d;
  j["beta"] = s.beta;
  j["mu_norm"] = s.mu_norm;
  j["means_csv"] = s.means_csv;
  j["workers"] = s.workers;
  j["max_iters"] = s.max_iters;
  j["tol"] = s.tol;
  j["mc_samples"] = s.mc_samples;
  j["quadrature_nodes"] = s.quadrature_nodes;
  j["em_max_iters"] = s.em_max_iters;
  j["lloyd_max_iters"] = s.lloyd_max_iters;
  j["em_tol"] = s.em_tol;
  return j;
}

SweepSpec spec_from_json(const json& input) {
  const json& doc = input.contains("spec") && input["spec"].is_object() ? input["spec"] : input;
  require(doc.is_object(), "config must be a JSON object");
  require(doc.contains("experiment"), "config: missing 'experiment'");
  const int version = doc.value("schema_version", kSchemaVersion);
  require(version == kSchemaVersion, "config: unsupported schema_version " + std::to_string(version));

  SweepSpec s = default_spec(parse_experiment(doc["experiment"].get<std::string>()));
  // Axes present in the document replace the defaults wholesale.
  if (doc.contains("axis0_name")) {
    s.axes.clear();
    for (int a = 0; doc.contains("axis" + std::to_string(a) + "_name"); ++a) {
      const std::string p = "axis" + std::to_string(a) + "_";
      const auto name = doc[p + "name"].get<std::string>();
      if (doc.contains(p + "values")) {
        s.axes.push_back(explicit_axis(name, doc[p + "values"].get<std::vector<double>>()));
      } else {
        const auto scale = doc.value(p + "scale", std::string("log"));
        require(scale == "log" || scale == "linear", "config: axis scale must be 'log' or 'linear'");
        s.axes.push_back(make_axis(name, scale == "log" ? AxisScale::Log : AxisScale::Linear,
                                   doc.at(p + "min").get<double>(), doc.at(p + "max").get<double>(),
                                   doc.at(p + "points").get<int>()));
      }
    }
  }
  s.n_list = doc.value("n_list", s.n_list);
  s.trials = doc.value("trials", s.trials);
  s.master_seed = doc.value("master_seed", s.master_seed);
  if (doc.contains("preset")) s.preset = parse_preset(doc["preset"].get<std::string>());
  s.K = doc.value("K", s.K);
  s.d = doc.value("d", s.d);
  s.beta = doc.value("beta", s.beta);
  s.mu_norm = doc.value("mu_norm", s.mu_norm);
  s.means_csv = doc.value("means_csv", s.means_csv);
  s.workers = doc.value("workers", s.workers);
  s.max_iters = doc.value("max_iters", s.max_iters);
  s.tol = doc.value("tol", s.tol);
  s.mc_samples = doc.value("mc_samples", s.mc_samples);
  s.quadrature_nodes = doc.value("quadrature_nodes", s.quadrature_nodes);
  s.em_max_iters = doc.value("em_max_iters", s.em_max_iters);
  s.lloyd_max_iters = doc.value("lloyd_max_iters", s.lloyd_max_iters);
  s.em_tol = doc.value("em_tol", s.em_tol);
  validate(s);
  return s;
}

SweepSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return spec_from_json(doc);
}

void validate(const SweepSpec& s) {
  require(s.trials >= 1, "trials must be at least 1");
  require(!s.axes.empty(), "at least one grid axis is required");
  for (const auto& ax : s.axes) {
    if (!ax.explicit_values.empty()) continue;
    // Zero points gives an empty grid.
    require(ax.points == 0 || ax.points >= 2, "axis '" + ax.name + "' needs 0 or at least 2 points");
    if (ax.points == 0) continue;
    if (ax.scale == AxisScale::Log)
      require(ax.min > 0.0 && ax.max > 0.0, "log axis '" + ax.name + "' needs positive bounds");
  }
  require(s.K >= 1 && s.d >= 1, "K and d must be positive");
  require(s.max_iters >= 1 && s.em_max_iters >= 1 && s.lloyd_max_iters >= 1, "iteration limits must be positive");
  const std::size_t expected_axes = s.experiment == Experiment::PhaseDiagram ? 2 : 1;
  require(s.axes.size() == expected_axes,
          to_string(s.experiment) + " expects " + std::to_string(expected_axes) + " axis/axes");
  switch (s.experiment) {
    case Experiment::PhaseDiagram:
      require(s.preset == ModelPreset::SymmetricK2 || s.preset == ModelPreset::Simplex,
              "phase-diagram needs the symmetric-k2 or simplex preset");
      break;
    case Experiment::MseVsSigma:
      require(!s.n_list.empty(), "mse-vs-sigma needs a nonempty n_list");
      break;
    case Experiment::HaVsTheory:
      require(s.preset == ModelPreset::SymmetricK2, "ha-vs-theory needs the symmetric-k2 preset");
      [[fallthrough]];
    case Experiment::ClusteringVsSnr:
      require(!s.n_list.empty(), to_string(s.experiment) + " needs n_list");
      break;
  }
}

MeanConfig preset_means(const SweepSpec& s) {
  switch (s.preset) {
    case ModelPreset::SymmetricK2: {
      MeanConfig m(2, s.d);
      m(0, 0) = s.mu_norm;
      m(1, 0) = -s.mu_norm;
      return m;
    }
    case ModelPreset::Simplex:
      return make_regular_simplex(s.K, s.d, s.beta);
    case ModelPreset::RandomGaussian: {
      MeanConfig m(s.K, s.d);
      CounterRng rng(derive_seed(s.master_seed, {0x4D45414E53ull}), 0);
      for (int l = 0; l < s.K; ++l)
        for (int k = 0; k < s.d; ++k) m(l, k) = rng.normal();
      return m;
    }
    case ModelPreset::CustomCsv:
      require(!s.means_csv.empty(), "custom-csv preset needs means_csv");
      return read_mean_config_csv(std::filesystem::path(s.means_csv));
  }
  throw InvalidArgument("unknown preset");
}

}  // namespace mismix
