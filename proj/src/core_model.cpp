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

#include "mismix/core_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "mismix/assignment.hpp"
#include "mismix/error.hpp"
#include "mismix/parallel.hpp"
#include "mismix/random.hpp"

namespace mismix {

MeanConfig::MeanConfig(int K, int d) : means_(RowMatrix::Zero(K, d)) {
  require(K >= 1 && d >= 1, "MeanConfig: K and d must be at least 1");
}

MeanConfig::MeanConfig(RowMatrix means) : means_(std::move(means)) {
  require(means_.rows() >= 1 && means_.cols() >= 1, "MeanConfig: K and d must be at least 1");
}

MeanConfig MeanConfig::from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty() && !rows.front().empty(), "MeanConfig: empty rows");
  const auto d = rows.front().size();
  RowMatrix m(rows.size(), d);
  for (std::size_t l = 0; l < rows.size(); ++l) {
    require(rows[l].size() == d, "MeanConfig: all means must share one dimension");
    for (std::size_t k = 0; k < d; ++k) m(l, k) = rows[l][k];
  }
  return MeanConfig(std::move(m));
}

Vector MeanConfig::centroid() const { return means_.colwise().mean().transpose(); }

MeanConfig MeanConfig::permuted(std::span<const int> order) const {
  require(static_cast<int>(order.size()) == K(), "permuted: order length must equal K");
  RowMatrix m(K(), d());
  for (int l = 0; l < K(); ++l) m.row(l) = means_.row(order[l]);
  return MeanConfig(std::move(m));
}

MeanConfig MeanConfig::translated(const Vector& shift) const {
  require(shift.size() == d(), "translated: dimension mismatch");
  RowMatrix m = means_;
  m.rowwise() += shift.transpose();
  return MeanConfig(std::move(m));
}

MeanConfig MeanConfig::scaled(double factor) const { return MeanConfig(RowMatrix(means_ * factor)); }

double MeanConfig::delta_min() const {
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < K(); ++l)
    for (int j = l + 1; j < K(); ++j) best = std::min(best, (means_.row(l) - means_.row(j)).norm());
  return best;
}

MixtureModel::MixtureModel(MeanConfig m, double s) : means(std::move(m)), sigma(s) {
  require(std::isfinite(s) && s >= 0.0, "MixtureModel: sigma must be finite and nonnegative");
}

int draw_observation(const MixtureModel& model, std::uint64_t seed, std::uint64_t index,
                     std::span<double> out) {
  CounterRng rng(seed, index);
  const int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(model.K())));
  const auto mu = model.means.mean(label);
  for (int k = 0; k < model.d(); ++k) out[k] = mu(k) + model.sigma * rng.normal();
  return label;
}

LabeledSample sample_gmm(const MixtureModel& model, std::size_t n, std::uint64_t seed,
                         int workers) {
  require(n >= 1, "sample_gmm: n must be at least 1");
  LabeledSample sample;
  sample.seed = seed;
  sample.labels.resize(n);
  sample.observations.resize(static_cast<Eigen::Index>(n), model.d());
  const int d = model.d();
  parallel_for(chunk_count(n), workers, [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(n, begin + kChunkSize);
    for (std::size_t i = begin; i < end; ++i) {
      std::span<double> row(sample.observations.row(static_cast<Eigen::Index>(i)).data(), d);
      sample.labels[i] = draw_observation(model, seed, i, row);
    }
  });
  return sample;
}

GeometrySummary geometry(const MixtureModel& model) {
  const MeanConfig& mu = model.means;
  require(mu.K() >= 1, "geometry: K must be at least 1");
  GeometrySummary g;
  g.mixture_mean = mu.centroid();
  RowMatrix centered = mu.matrix();
  centered.rowwise() -= g.mixture_mean.transpose();
  g.sigma_mu = (centered.transpose() * centered) / static_cast<double>(mu.K());
  g.sigma_mu = 0.5 * (g.sigma_mu + g.sigma_mu.transpose()).eval();
  const double spread = centered.squaredNorm() / mu.K();
  const double s2 = model.sigma * model.sigma;
  if (spread == 0.0) {
    g.snr = 0.0;
  } else {
    g.snr = s2 > 0.0 ? spread / s2 : std::numeric_limits<double>::infinity();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.sigma_mu, Eigen::EigenvaluesOnly);
  g.lambda_max = std::max(0.0, eig.eigenvalues().maxCoeff());

  if (mu.K() == 1) {
    g.delta_min = std::numeric_limits<double>::infinity();
    g.delta_max = 0.0;
    g.delta_min_defined = false;
  } else {
    g.delta_min = mu.delta_min();
    g.delta_max = 0.0;
    for (int l = 0; l < mu.K(); ++l)
      for (int j = l + 1; j < mu.K(); ++j)
        g.delta_max = std::max(g.delta_max, (mu.mean(l) - mu.mean(j)).norm());
  }
  return g;
}

Eigen::MatrixXd pairwise_sq_distances(const MeanConfig& a, const MeanConfig& b) {
  Eigen::MatrixXd cost(a.K(), b.K());
  for (int i = 0; i < a.K(); ++i)
    for (int j = 0; j < b.K(); ++j) cost(i, j) = (a.mean(i) - b.mean(j)).squaredNorm();
  return cost;
}

double perm_distance(const MeanConfig& a, const MeanConfig& b) {
  require(a.K() == b.K() && a.d() == b.d(), "perm_distance: shape mismatch");
  const Eigen::MatrixXd cost = pairwise_sq_distances(a, b);
  return std::sqrt(assignment_cost(cost, solve_assignment(cost)));
}

double normalized_mse(const MeanConfig& estimate, const MeanConfig& truth) {
  const double norm_sq = truth.matrix().squaredNorm();
  require(norm_sq > 0.0, "normalized_mse: truth has zero Frobenius norm");
  const double dist = perm_distance(estimate, truth);
  return dist * dist / norm_sq;
}

MseReport normalized_mse_report(const MeanConfig& estimate, const MeanConfig& truth) {
  return {normalized_mse(estimate, truth), !truth.is_valid_ground_truth() && truth.K() > 1};
}

namespace {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw InvalidArgument("csv: cannot parse number '" + text + "'");
  return value;
}

}  // namespace

void write_mean_config_csv(std::ostream& out, const MeanConfig& config) {
  out << "component";
  for (int k = 0; k < config.d(); ++k) out << ",dim" << k;
  out << '\n';
  for (int l = 0; l < config.K(); ++l) {
    out << l;
    for (int k = 0; k < config.d(); ++k) out << ',' << format_double(config(l, k));
    out << '\n';
  }
}

void write_mean_config_csv(const std::filesystem::path& path, const MeanConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_mean_config_csv(out, config);
}

MeanConfig read_mean_config_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: missing header");
  const auto header = split_csv_line(line);
  require(header.size() >= 2 && header[0] == "component", "csv: header must start with 'component'");
  for (std::size_t k = 1; k < header.size(); ++k)
    require(header[k] == "dim" + std::to_string(k - 1), "csv: unexpected column '" + header[k] + "'");
  const std::size_t d = header.size() - 1;

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    require(fields.size() == d + 1, "csv: row has wrong number of fields");
    require(std::stoul(fields[0]) == rows.size(), "csv: components must be listed in order");
    std::vector<double> row(d);
    for (std::size_t k = 0; k < d; ++k) row[k] = parse_double(fields[k + 1]);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "csv: no components");
  return MeanConfig::from_rows(rows);
}

MeanConfig read_mean_config_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_mean_config_csv(in);
}

void write_labeled_sample_csv(std::ostream& out, const LabeledSample& sample) {
  const auto d = sample.observations.cols();
  out << "label";
  for (Eigen::Index k = 0; k < d; ++k) out << ",dim" << k;
  out << '\n';
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out << sample.labels[i];
    for (Eigen::Index k = 0; k < d; ++k)
      out << ',' << format_double(sample.observations(static_cast<Eigen::Index>(i), k));
    out << '\n';
  }
}

}  // namespace mismix
