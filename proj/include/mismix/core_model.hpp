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
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mismix {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// n x d observations, one row per draw.
using Observations = RowMatrix;

/// An ordered tuple of K component means in R^d, stored row-major K x d.
class MeanConfig {
 public:
  MeanConfig() = default;
  MeanConfig(int K, int d);
  explicit MeanConfig(RowMatrix means);

  /// Convenience for tests and presets: one inner vector per component.
  static MeanConfig from_rows(const std::vector<std::vector<double>>& rows);

  int K() const { return static_cast<int>(means_.rows()); }
  int d() const { return static_cast<int>(means_.cols()); }

  auto mean(int component) const { return means_.row(component); }
  auto mean(int component) { return means_.row(component); }
  double operator()(int component, int dim) const { return means_(component, dim); }
  double& operator()(int component, int dim) { return means_(component, dim); }

  const RowMatrix& matrix() const { return means_; }
  RowMatrix& matrix() { return means_; }

  double frobenius_norm() const { return means_.norm(); }
  Vector centroid() const;

  /// result.mean(l) == mean(order[l]).
  MeanConfig permuted(std::span<const int> order) const;
  MeanConfig translated(const Vector& shift) const;
  MeanConfig scaled(double factor) const;

  /// Minimum pairwise distance; +inf for K = 1.
  double delta_min() const;
  /// True when the configuration can serve as ground truth (Delta_min > 0).
  bool is_valid_ground_truth() const { return K() >= 1 && delta_min() > 0.0; }

  bool operator==(const MeanConfig& other) const { return means_ == other.means_; }

 private:
  RowMatrix means_;
};

/// The data-generating law: equal-weight isotropic Gaussian mixture.
struct MixtureModel {
  MeanConfig means;
  double sigma = 1.0;

  MixtureModel() = default;
  MixtureModel(MeanConfig m, double s);

  int K() const { return means.K(); }
  int d() const { return means.d(); }
};

struct LabeledSample {
  std::vector<int> labels;
  Observations observations;
  std::uint64_t seed = 0;

  std::size_t size() const { return labels.size(); }
};

struct GeometrySummary {
  double snr = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  Eigen::MatrixXd sigma_mu;
  double lambda_max = 0.0;
  Vector mixture_mean;
  /// False for K = 1, where delta_min is reported as +inf.
  bool delta_min_defined = true;
};

/// Draws n labelled observations. Observation i depends only on
/// (model, seed, i), so the output is identical for any worker count.
LabeledSample sample_gmm(const MixtureModel& model, std::size_t n, std::uint64_t seed,
                         int workers = 0);

/// Generates observation `index` of the stream keyed by `seed` into
/// `out` and returns its label. sample_gmm is built from this.
int draw_observation(const MixtureModel& model, std::uint64_t seed, std::uint64_t index,
                     std::span<double> out);

GeometrySummary geometry(const MixtureModel& model);

/// Matrix of squared distances ||a_i - b_j||^2.
Eigen::MatrixXd pairwise_sq_distances(const MeanConfig& a, const MeanConfig& b);

/// min over permutations of ||a - pi b||_F, solved as a linear assignment.
double perm_distance(const MeanConfig& a, const MeanConfig& b);

/// perm_distance(estimate, truth)^2 / ||truth||_F^2.
double normalized_mse(const MeanConfig& estimate, const MeanConfig& truth);

struct MseReport {
  double value = 0.0;
  /// Set when truth has coincident means (Delta_min = 0).
  bool degenerate_truth = false;
};
MseReport normalized_mse_report(const MeanConfig& estimate, const MeanConfig& truth);

// CSV: header "component,dim0,...,dim{d-1}", one row per component.
void write_mean_config_csv(std::ostream& out, const MeanConfig& config);
void write_mean_config_csv(const std::filesystem::path& path, const MeanConfig& config);
MeanConfig read_mean_config_csv(std::istream& in);
MeanConfig read_mean_config_csv(const std::filesystem::path& path);

// Debug dump: header "label,dim0,...".
void write_labeled_sample_csv(std::ostream& out, const LabeledSample& sample);

}  // namespace mismix
