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
#include <iosfwd>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "mismix/core_model.hpp"
#include "mismix/quadrature.hpp"

namespace mismix {

enum class PopulationOptimizer { Em, Lloyd, DampedGradient };

/// Identifies one member of the mismatched objective family plus the
/// settings of the expectation engine and the population minimizers.
struct FitSpec {
  /// Fitted standard deviation.
  double tau = 1.0;
  std::size_t mc_samples = 1'000'000;
  int quadrature_nodes = 256;
  PopulationOptimizer optimizer = PopulationOptimizer::Em;
  int max_iters = 5000;
  /// Stop when successive iterates are within this perm_distance. Zero
  /// selects 1e-8 ||truth||_F (quadrature) or 1e-4 ||truth||_F (Monte Carlo).
  double tol = 0.0;
  /// Keys the common-random-numbers pool used when d >= 2.
  std::uint64_t seed = 0;

  double rho(const MixtureModel& truth) const { return tau / truth.sigma; }
  static FitSpec with_rho(double rho, const MixtureModel& truth) {
    FitSpec spec;
    spec.tau = rho * truth.sigma;
    return spec;
  }
};

struct ObjectiveValue {
  /// Nats.
  double value = 0.0;
  double std_error = 0.0;
  std::size_t evaluations = 0;
};

/// Expectation engine bound to one truth: exact composite quadrature for
/// d = 1, a frozen Monte Carlo pool for d >= 2.
class PopulationEngine {
 public:
  PopulationEngine(MixtureModel truth, const FitSpec& spec);

  const MixtureModel& truth() const { return truth_; }
  bool uses_quadrature() const { return truth_.d() == 1; }
  double default_tol() const;

  /// Node set adapted to `candidate` at temperature tau (0 = hard).
  const NodeSet& nodes(const MeanConfig& candidate, double tau);

  ObjectiveValue nll(const MeanConfig& candidate, double tau);
  ObjectiveValue kmeans_risk(const MeanConfig& candidate);
  ObjectiveValue rtau(const MeanConfig& candidate, double tau);

  /// One pass computing L_tau at `candidate` and the EM map
  /// m_l <- E[gamma_l Y] / E[gamma_l]. Components with zero mass keep
  /// their position and are counted in `frozen`.
  struct Step {
    ObjectiveValue objective;
    MeanConfig next;
    MeanConfig gradient;
    int frozen = 0;
  };
  Step em_step(const MeanConfig& candidate, double tau);
  /// Same for the hard-assignment map (Lloyd), objective = Phi.
  Step lloyd_step(const MeanConfig& candidate);

 private:
  MixtureModel truth_;
  QuadratureOptions quad_;
  NodeSet pool_;
  NodeSet scratch_;
};

ObjectiveValue population_nll(const MeanConfig& candidate, double tau, const MixtureModel& truth,
                              const FitSpec& spec);
ObjectiveValue population_kmeans_risk(const MeanConfig& candidate, const MixtureModel& truth,
                                      const FitSpec& spec);
/// -E log sum_l exp(-(||Y - mu_l||^2 - min_j ||Y - mu_j||^2) / (2 tau^2)), in [-log K, 0].
ObjectiveValue rtau_remainder(const MeanConfig& candidate, double tau, const MixtureModel& truth,
                              const FitSpec& spec);

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double std_error = 0.0;
  double perm_dist_to_truth = 0.0;
  double perm_dist_step = 0.0;
};

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

struct PopulationFit {
  MeanConfig means;
  ObjectiveValue objective;
  std::vector<TraceRow> trace;
  int iterations = 0;
  bool converged = false;
  /// Objective rose beyond noise for five consecutive iterations.
  bool diverged = false;
  /// Number of (iteration, component) pairs frozen for lack of mass.
  int frozen_events = 0;
};

/// Stationary point of L_tau reached from `init` by population EM (or the
/// damped-gradient fallback when spec.optimizer says so).
PopulationFit quasi_mle(const MixtureModel& truth, const FitSpec& spec, const MeanConfig& init);
PopulationFit quasi_mle(PopulationEngine& engine, const FitSpec& spec, const MeanConfig& init);

/// Stationary point of Phi reached from `init` by population Lloyd.
PopulationFit hard_assignment_target(const MixtureModel& truth, const FitSpec& spec,
                                     const MeanConfig& init);
PopulationFit hard_assignment_target(PopulationEngine& engine, const FitSpec& spec,
                                     const MeanConfig& init);

struct MultiStartFit {
  PopulationFit best;
  /// 0 = truth, 1 = 0.01 * truth, 2 = random draw.
  int best_start = 0;
  std::vector<PopulationFit> runs;
};

/// Runs quasi_mle from the truth, from 0.01 * truth and from K draws of the
/// true mixture (keyed on `seed`), keeping the lowest objective. Ties go to
/// the earlier start.
MultiStartFit quasi_mle_multistart(const MixtureModel& truth, const FitSpec& spec,
                                   std::uint64_t seed);

/// Blocks of the Hessian of L_tau at the all-zero configuration, in
/// centered coordinates where E[YY^T] = second_moment.
struct HessianBlocks {
  Eigen::MatrixXd diag_block;
  Eigen::MatrixXd offdiag_block;
  int K = 0;
  /// Smallest Rayleigh quotient h^T H h / ||h||^2 over zero-sum directions
  /// (sum_l h_l = 0). +inf when K = 1.
  double zero_sum_min_eig = std::numeric_limits<double>::infinity();
  /// Smallest curvature h^T H h / ||u||^2 along common shifts h = (u, ..., u).
  double common_shift_min_eig = 0.0;

  /// The full Kd x Kd matrix.
  Eigen::MatrixXd full() const;
};

HessianBlocks hessian_at_origin(double tau, const Eigen::MatrixXd& second_moment, int K);

struct CollapseReport {
  double rho_sq_threshold = 1.0;
  double lambda_max = 0.0;
  double snr = 0.0;
  int d = 1;

  /// Whether the collapsed configuration is a local minimum at ratio rho.
  bool is_stable_at(double rho) const { return rho * rho >= rho_sq_threshold; }
  /// 1 + snr/d <= threshold <= 1 + snr, up to `tol`.
  bool within_bounds(double tol = 1e-10) const {
    return rho_sq_threshold >= 1.0 + snr / d - tol && rho_sq_threshold <= 1.0 + snr + tol;
  }
};

CollapseReport collapse_report(const MixtureModel& truth);

/// K unit vectors with pairwise inner product -1/(K-1), scaled by beta,
/// spanning the first K-1 coordinates of R^d.
MeanConfig make_regular_simplex(int K, int d, double beta);

/// Orthonormal basis of the sum-zero subspace of R^K, as a (K-1) x K matrix.
Eigen::MatrixXd helmert_basis(int K);

}  // namespace mismix
