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

#include "mismix/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>

#include <json.hpp>

#include "mismix/clustering.hpp"
#include "mismix/error.hpp"
#include "mismix/estimators.hpp"
#include "mismix/k2_analytic.hpp"
#include "mismix/parallel.hpp"
#include "mismix/population.hpp"
#include "mismix/random.hpp"

#ifndef MISMIX_GIT_DESCRIBE
#define MISMIX_GIT_DESCRIBE "unknown"
#endif

namespace mismix {

using nlohmann::json;

std::string format_number(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

const Metric* CellResult::find(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return &m;
  return nullptr;
}

double CellResult::value(const std::string& name) const {
  const Metric* m = find(name);
  if (!m) throw InvalidArgument("cell has no metric '" + name + "'");
  return m->value;
}

namespace {

double parse_number(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{}) throw InvalidArgument("cannot parse number '" + text + "'");
  return v;
}

void add_flag(CellResult& cell, const std::string& flag) {
  if (cell.flags.find(flag) != std::string::npos) return;
  if (!cell.flags.empty()) cell.flags += ';';
  cell.flags += flag;
}

double to_db(double mse) { return 10.0 * std::log10(mse); }

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanAndError summarize(const std::vector<double>& xs) {
  MeanAndError out;
  if (xs.empty()) return {std::nan(""), std::nan("")};
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std_error = std::sqrt(ss / (xs.size() - 1.0) / static_cast<double>(xs.size()));
  }
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fingerprint(const SweepSpec& spec) {
  json j = to_json(spec);
  j.erase("workers");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

json cell_to_json(const CellResult& cell, const std::string& print) {
  json j;
  j["fingerprint"] = print;
  j["index"] = cell.index;
  std::vector<std::string> coords;
  for (double c : cell.coords) coords.push_back(format_number(c));
  j["coords"] = coords;
  j["seed"] = cell.seed;
  j["flags"] = cell.flags;
  json metrics = json::array();
  for (const auto& m : cell.metrics)
    metrics.push_back({{"name", m.name},
                       {"value", format_number(m.value)},
                       {"std_error", format_number(m.std_error)},
                       {"n_trials", m.n_trials}});
  j["metrics"] = metrics;
  return j;
}

CellResult cell_from_json(const json& j) {
  CellResult cell;
  cell.index = j.at("index").get<std::vector<std::size_t>>();
  for (const auto& c : j.at("coords")) cell.coords.push_back(parse_number(c.get<std::string>()));
  cell.seed = j.at("seed").get<std::uint64_t>();
  cell.flags = j.at("flags").get<std::string>();
  for (const auto& m : j.at("metrics"))
    cell.metrics.push_back({m.at("name").get<std::string>(), parse_number(m.at("value").get<std::string>()),
                            parse_number(m.at("std_error").get<std::string>()), m.at("n_trials").get<std::size_t>()});
  return cell;
}

std::uint64_t experiment_code(Experiment e) { return static_cast<std::uint64_t>(e) + 1; }

using CellFn = std::function<CellResult(const std::vector<double>& coords, std::uint64_t seed)>;

SweepGrid run_grid(const SweepSpec& spec, const RunOptions& options, const CellFn& fn) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  SweepGrid grid;
  grid.spec = spec;
  for (auto& [name, values] : grid_axes(spec)) {
    grid.axis_names.push_back(name);
    grid.axis_values.push_back(values);
  }

  // Row-major enumeration, so flat order is lexicographic in the indices.
  std::size_t total = 1;
  for (const auto& v : grid.axis_values) total *= v.size();
  std::vector<std::vector<std::size_t>> indices(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::size_t> idx(grid.axis_values.size());
    std::size_t rem = flat;
    for (std::size_t a = grid.axis_values.size(); a-- > 0;) {
      idx[a] = rem % grid.axis_values[a].size();
      rem /= grid.axis_values[a].size();
    }
    indices[flat] = std::move(idx);
  }

  const std::string print = fingerprint(spec);
  std::filesystem::path cache_dir;
  if (!options.out_dir.empty()) {
    cache_dir = options.out_dir / "cells";
    std::filesystem::create_directories(cache_dir);
  }

  grid.cells.resize(total);
  std::vector<char> done(total, 0);
  if (options.resume && !cache_dir.empty()) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      const auto path = cache_dir / ("cell_" + std::to_string(flat) + ".json");
      if (!std::filesystem::exists(path)) continue;
      try {
        std::ifstream in(path);
        json j;
        in >> j;
        if (j.value("fingerprint", std::string()) != print) continue;
        CellResult cell = cell_from_json(j);
        if (cell.index != indices[flat]) continue;
        grid.cells[flat] = std::move(cell);
        done[flat] = 1;
      } catch (const std::exception&) {
        // Unreadable cache entries are recomputed.
      }
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t flat = 0; flat < total; ++flat)
    if (!done[flat]) todo.push_back(flat);

  std::mutex writer;
  std::size_t finished = total - todo.size();
  const int workers = options.workers > 0 ? options.workers : (spec.workers > 0 ? spec.workers : default_workers());
  parallel_for(todo.size(), workers, [&](std::size_t t) {
    const std::size_t flat = todo[t];
    std::vector<double> coords;
    std::vector<std::uint64_t> seed_coords{experiment_code(spec.experiment)};
    for (std::size_t a = 0; a < indices[flat].size(); ++a) {
      coords.push_back(grid.axis_values[a][indices[flat][a]]);
      seed_coords.push_back(indices[flat][a]);
    }
    std::uint64_t seed = splitmix64(spec.master_seed);
    for (auto c : seed_coords) seed = derive_seed(seed, {c});
    CellResult cell = fn(coords, seed);
    cell.index = indices[flat];
    cell.coords = coords;
    cell.seed = seed;

    std::lock_guard lock(writer);
    if (!cache_dir.empty()) {
      std::ofstream out(cache_dir / ("cell_" + std::to_string(flat) + ".json"));
      out << cell_to_json(cell, print).dump() << '\n';
    }
    grid.cells[flat] = std::move(cell);
    ++finished;
    if (options.progress) std::cerr << "[" << finished << "/" << total << "] cell " << flat << " done\n";
  });

  grid.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return grid;
}

FitSpec population_spec(const SweepSpec& spec, double tau, std::uint64_t seed) {
  FitSpec fs;
  fs.tau = tau;
  fs.max_iters = spec.max_iters;
  fs.tol = spec.tol;
  fs.mc_samples = spec.mc_samples;
  fs.quadrature_nodes = spec.quadrature_nodes;
  fs.seed = seed;
  return fs;
}

EmConfig estimator_config(const SweepSpec& spec, double tau, const MeanConfig& init, bool lloyd) {
  EmConfig cfg;
  cfg.tau = tau;
  cfg.max_iters = lloyd ? spec.lloyd_max_iters : spec.em_max_iters;
  cfg.tol = spec.em_tol;
  cfg.init = InitMethod::Truth;
  cfg.init_means = init;
  cfg.workers = 1;
  return cfg;
}

}  // namespace

std::vector<std::pair<std::string, std::vector<double>>> grid_axes(const SweepSpec& spec) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const auto& ax : spec.axes) out.emplace_back(ax.name, ax.values());
  if (spec.experiment == Experiment::MseVsSigma) {
    std::vector<double> ns(spec.n_list.begin(), spec.n_list.end());
    out.emplace_back("n", ns);
  }
  return out;
}

double sigma_for_snr(const MeanConfig& means, double snr) {
  require(snr > 0.0, "sigma_for_snr: snr must be positive");
  const GeometrySummary g = geometry(MixtureModel(means, 1.0));
  require(g.snr > 0.0, "sigma_for_snr: means have no spread");
  return std::sqrt(g.snr / snr);
}

CellResult phase_diagram_cell(const SweepSpec& spec, double snr, double rho_sq, std::uint64_t seed) {
  const MeanConfig means = preset_means(spec);
  const MixtureModel truth(means, sigma_for_snr(means, snr));
  const FitSpec fs = population_spec(spec, std::sqrt(rho_sq) * truth.sigma, seed);
  const MultiStartFit fit = quasi_mle_multistart(truth, fs, seed);
  const CollapseReport collapse = collapse_report(truth);

  CellResult cell;
  const double mse = normalized_mse(fit.best.means, means);
  const double collapse_start_mse = normalized_mse(fit.runs[1].means, means);
  cell.metrics = {
      {"mse", mse, 0.0, 1},
      {"mse_db", to_db(mse), 0.0, 1},
      {"objective", fit.best.objective.value, fit.best.objective.std_error, 1},
      {"mse_collapse_start", collapse_start_mse, 0.0, 1},
      {"collapse_threshold", collapse.rho_sq_threshold, 0.0, 1},
      {"collapse_stable", collapse.is_stable_at(std::sqrt(rho_sq)) ? 1.0 : 0.0, 0.0, 1},
      {"best_start", static_cast<double>(fit.best_start), 0.0, 1},
      {"iterations", static_cast<double>(fit.best.iterations), 0.0, 1},
  };
  if (!fit.best.converged) add_flag(cell, "nonconverged");
  if (fit.best.diverged) add_flag(cell, "diverged");
  if (fit.best.frozen_events > 0) add_flag(cell, "frozen_component");
  return cell;
}

CellResult mse_vs_sigma_cell(const SweepSpec& spec, double sigma_sq, std::size_t n, std::uint64_t seed) {
  const MeanConfig means = preset_means(spec);
  const double sigma = std::sqrt(sigma_sq);
  const MixtureModel truth(means, sigma);
  std::vector<double> em, lloyd;
  int em_converged = 0, lloyd_converged = 0;
  CellResult cell;
  for (int t = 0; t < spec.trials; ++t) {
    try {
      const LabeledSample sample = sample_gmm(truth, n, derive_seed(seed, {static_cast<std::uint64_t>(t)}), 1);
      const FitResult em_fit_result = em_fit(sample.observations, means.K(), estimator_config(spec, sigma, means, false), seed);
      const FitResult lloyd_result = lloyd_fit(sample.observations, means.K(), estimator_config(spec, sigma, means, true), seed);
      em.push_back(normalized_mse(em_fit_result.means, means));
      lloyd.push_back(normalized_mse(lloyd_result.means, means));
      em_converged += em_fit_result.converged;
      lloyd_converged += lloyd_result.converged;
    } catch (const std::exception&) {
      add_flag(cell, "trial_failed");
    }
  }
  const auto em_s = summarize(em);
  const auto lloyd_s = summarize(lloyd);
  cell.metrics = {
      {"snr", geometry(truth).snr, 0.0, 1},
      {"em_mse", em_s.mean, em_s.std_error, em.size()},
      {"em_mse_db", to_db(em_s.mean), 0.0, em.size()},
      {"lloyd_mse", lloyd_s.mean, lloyd_s.std_error, lloyd.size()},
      {"lloyd_mse_db", to_db(lloyd_s.mean), 0.0, lloyd.size()},
      {"em_converged_fraction", em.empty() ? 0.0 : static_cast<double>(em_converged) / em.size(), 0.0, em.size()},
      {"lloyd_converged_fraction", lloyd.empty() ? 0.0 : static_cast<double>(lloyd_converged) / lloyd.size(), 0.0, lloyd.size()},
  };
  if (em_converged < static_cast<int>(em.size()) || lloyd_converged < static_cast<int>(lloyd.size()))
    add_flag(cell, "nonconverged");
  return cell;
}

CellResult clustering_cell(const SweepSpec& spec, double snr, std::uint64_t seed) {
  const MeanConfig means = preset_means(spec);
  const MixtureModel model(means, sigma_for_snr(means, snr));
  const ErrorEstimate est = bayes_error_mc(model, spec.n_list.front(), seed, 1);
  const BoundPair bounds = error_bounds(model);
  CellResult cell;
  cell.metrics = {
      {"p_err", est.p_err, est.std_error, est.n_trials},
      {"theory", spec.preset == ModelPreset::SymmetricK2 ? bayes_error_k2(snr) : std::nan(""), 0.0, 1},
      {"lower", bounds.lower, 0.0, 1},
      {"upper", bounds.upper, 0.0, 1},
      {"mi_upper", bounds.mi_upper, 0.0, 1},
      {"mills_refined", bounds.mills_refined, 0.0, 1},
  };
  return cell;
}

CellResult ha_vs_theory_cell(const SweepSpec& spec, double snr, std::uint64_t seed) {
  const MeanConfig means = preset_means(spec);
  const double sigma = sigma_for_snr(means, snr);
  const MixtureModel truth(means, sigma);
  const K2Model k2(means.mean(0).transpose(), sigma);
  const std::size_t n = spec.n_list.front();
  std::vector<double> mse;
  CellResult cell;
  for (int t = 0; t < spec.trials; ++t) {
    try {
      const LabeledSample sample = sample_gmm(truth, n, derive_seed(seed, {static_cast<std::uint64_t>(t)}), 1);
      const FitResult fit = lloyd_fit(sample.observations, 2, estimator_config(spec, sigma, means, true), seed);
      mse.push_back(normalized_mse(fit.means, means));
      if (!fit.converged) add_flag(cell, "nonconverged");
    } catch (const std::exception&) {
      add_flag(cell, "trial_failed");
    }
  }
  const auto s = summarize(mse);
  const double theory = ha_mse_k2(k2);
  cell.metrics = {
      {"theory", theory, 0.0, 1},
      {"theory_db", to_db(theory), 0.0, 1},
      {"lloyd_mse", s.mean, s.std_error, mse.size()},
      {"lloyd_mse_db", to_db(s.mean), 0.0, mse.size()},
      {"asymptote_low", ha_mse_asymptote(snr, SnrRegime::Low), 0.0, 1},
      {"asymptote_high", ha_mse_asymptote(snr, SnrRegime::High), 0.0, 1},
  };
  return cell;
}

SweepGrid run_phase_diagram(const SweepSpec& spec, const RunOptions& options) {
  require(spec.experiment == Experiment::PhaseDiagram, "run_phase_diagram: wrong experiment");
  return run_grid(spec, options, [&](const std::vector<double>& c, std::uint64_t seed) {
    return phase_diagram_cell(spec, c[0], c[1], seed);
  });
}

SweepGrid run_mse_vs_sigma(const SweepSpec& spec, const RunOptions& options) {
  require(spec.experiment == Experiment::MseVsSigma, "run_mse_vs_sigma: wrong experiment");
  return run_grid(spec, options, [&](const std::vector<double>& c, std::uint64_t seed) {
    return mse_vs_sigma_cell(spec, c[0], static_cast<std::size_t>(c[1]), seed);
  });
}

SweepGrid run_clustering_vs_snr(const SweepSpec& spec, const RunOptions& options) {
  require(spec.experiment == Experiment::ClusteringVsSnr, "run_clustering_vs_snr: wrong experiment");
  return run_grid(spec, options, [&](const std::vector<double>& c, std::uint64_t seed) {
    return clustering_cell(spec, c[0], seed);
  });
}

SweepGrid run_ha_vs_theory(const SweepSpec& spec, const RunOptions& options) {
  require(spec.experiment == Experiment::HaVsTheory, "run_ha_vs_theory: wrong experiment");
  return run_grid(spec, options, [&](const std::vector<double>& c, std::uint64_t seed) {
    return ha_vs_theory_cell(spec, c[0], seed);
  });
}

SweepGrid run_experiment(const SweepSpec& spec, const RunOptions& options) {
  switch (spec.experiment) {
    case Experiment::PhaseDiagram: return run_phase_diagram(spec, options);
    case Experiment::MseVsSigma: return run_mse_vs_sigma(spec, options);
    case Experiment::ClusteringVsSnr: return run_clustering_vs_snr(spec, options);
    case Experiment::HaVsTheory: return run_ha_vs_theory(spec, options);
  }
  throw InvalidArgument("unknown experiment");
}

void write_results_csv(std::ostream& out, const SweepGrid& grid) {
  out << "cell";
  for (const auto& name : grid.axis_names) out << ',' << name << "_index," << name;
  out << ",metric,value,std_error,n_trials,seed,flags\n";
  for (std::size_t flat = 0; flat < grid.cells.size(); ++flat) {
    const CellResult& cell = grid.cells[flat];
    for (const auto& m : cell.metrics) {
      out << flat;
      for (std::size_t a = 0; a < cell.index.size(); ++a) out << ',' << cell.index[a] << ',' << format_number(cell.coords[a]);
      out << ',' << m.name << ',' << format_number(m.value) << ',' << format_number(m.std_error) << ',' << m.n_trials
          << ',' << cell.seed << ',' << cell.flags << '\n';
    }
  }
}

void write_theory_csv(std::ostream& out, const SweepGrid& grid) {
  switch (grid.spec.experiment) {
    case Experiment::PhaseDiagram: {
      out << "snr,rho_sq_threshold\n";
      for (const auto& cell : grid.cells)
        if (cell.index[1] == 0)
          out << format_number(cell.coords[0]) << ',' << format_number(cell.value("collapse_threshold")) << '\n';
      break;
    }
    case Experiment::MseVsSigma: {
      out << "sigma_sq,n,snr,em_mse,em_std_err,lloyd_mse,lloyd_std_err\n";
      for (const auto& cell : grid.cells) {
        const Metric* em = cell.find("em_mse");
        const Metric* ll = cell.find("lloyd_mse");
        out << format_number(cell.coords[0]) << ',' << format_number(cell.coords[1]) << ','
            << format_number(cell.value("snr")) << ',' << format_number(em->value) << ',' << format_number(em->std_error)
            << ',' << format_number(ll->value) << ',' << format_number(ll->std_error) << '\n';
      }
      break;
    }
    case Experiment::ClusteringVsSnr: {
      out << "snr,p_err,std_err,lower,upper,mi_upper,theory\n";
      for (const auto& cell : grid.cells) {
        const Metric* p = cell.find("p_err");
        out << format_number(cell.coords[0]) << ',' << format_number(p->value) << ',' << format_number(p->std_error)
            << ',' << format_number(cell.value("lower")) << ',' << format_number(cell.value("upper")) << ','
            << format_number(cell.value("mi_upper")) << ',' << format_number(cell.value("theory")) << '\n';
      }
      break;
    }
    case Experiment::HaVsTheory: {
      out << "snr,theory,asymptote_low,asymptote_high,lloyd_mse,lloyd_std_err\n";
      for (const auto& cell : grid.cells) {
        const Metric* l = cell.find("lloyd_mse");
        out << format_number(cell.coords[0]) << ',' << format_number(cell.value("theory")) << ','
            << format_number(cell.value("asymptote_low")) << ',' << format_number(cell.value("asymptote_high")) << ','
            << format_number(l->value) << ',' << format_number(l->std_error) << '\n';
      }
      break;
    }
  }
}

namespace {

const char* plot_script(Experiment e) {
  switch (e) {
    case Experiment::PhaseDiagram:
      return "# gnuplot: normalized MSE (dB) over (SNR, rho^2) with the collapse threshold\n"
             "set datafile separator ','\nset logscale xy\nset xlabel 'SNR'\nset ylabel 'rho^2'\n"
             "set view map\nset title 'normalized MSE (dB)'\n"
             "splot '< grep \",mse_db,\" results.csv' using 3:5:7 with points pt 5 ps 2 palette notitle, \\\n"
             "      'theory.csv' using 1:2:(0) every ::1 with lines lw 2 title 'collapse threshold'\n";
    case Experiment::MseVsSigma:
      return "# gnuplot: MSE versus sigma^2 for each n\nset datafile separator ','\nset logscale xy\n"
             "set xlabel 'sigma^2'\nset ylabel 'normalized MSE'\n"
             "plot 'theory.csv' every ::1 using 1:4 with linespoints title 'EM', \\\n"
             "     'theory.csv' every ::1 using 1:6 with linespoints title 'Lloyd'\n";
    case Experiment::ClusteringVsSnr:
      return "# gnuplot: misclassification probability versus SNR\nset datafile separator ','\nset logscale x\n"
             "set xlabel 'SNR'\nset ylabel 'P_err'\n"
             "plot 'theory.csv' every ::1 using 1:2:3 with yerrorbars title 'Monte Carlo', \\\n"
             "     '' every ::1 using 1:7 with lines title 'closed form', \\\n"
             "     '' every ::1 using 1:4 with lines title 'lower bound', \\\n"
             "     '' every ::1 using 1:5 with lines title 'upper bound'\n";
    case Experiment::HaVsTheory:
      return "# gnuplot: hard-assignment MSE versus SNR\nset datafile separator ','\nset logscale xy\n"
             "set xlabel 'SNR'\nset ylabel 'normalized MSE'\n"
             "plot 'theory.csv' every ::1 using 1:2 with lines title 'population', \\\n"
             "     '' every ::1 using 1:5:6 with yerrorbars title 'Lloyd, finite n', \\\n"
             "     '' every ::1 using 1:3 with lines dt 2 title 'low-SNR asymptote', \\\n"
             "     '' every ::1 using 1:4 with lines dt 3 title 'high-SNR asymptote'\n";
  }
  return "";
}

}  // namespace

void aggregate_and_write(const SweepGrid& grid, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("results.csv");
    write_results_csv(out, grid);
  }
  {
    auto out = open("theory.csv");
    write_theory_csv(out, grid);
  }
  if (grid.spec.experiment == Experiment::ClusteringVsSnr) {
    std::vector<ClusteringRow> rows;
    const MeanConfig means = preset_means(grid.spec);
    for (const auto& cell : grid.cells) {
      const Metric* p = cell.find("p_err");
      ClusteringRow row;
      row.snr = cell.coords[0];
      row.estimate = {p->value, p->std_error, p->n_trials};
      row.bounds = error_bounds(MixtureModel(means, sigma_for_snr(means, row.snr)));
      rows.push_back(row);
    }
    auto out = open("clustering.csv");
    write_clustering_csv(out, rows);
  }
  {
    auto out = open("plot.gp");
    out << plot_script(grid.spec.experiment);
  }
  json manifest;
  manifest["tool"] = "mismix";
  manifest["schema_version"] = kSchemaVersion;
  manifest["experiment"] = to_string(grid.spec.experiment);
  manifest["master_seed"] = grid.spec.master_seed;
  manifest["spec"] = to_json(grid.spec);
  manifest["fingerprint"] = fingerprint(grid.spec);
  manifest["git_describe"] = MISMIX_GIT_DESCRIBE;
  manifest["wall_time_seconds"] = grid.wall_seconds;
  manifest["cells"] = grid.cells.size();
  auto out = open("manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace mismix
