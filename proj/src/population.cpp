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

#include "mismix/population.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mismix/error.hpp"
#include "mismix/random.hpp"

namespace mismix {
namespace {

constexpr double kMinTauRatio = 1e-12;

// Squared distances from y to every candidate mean; returns the first index
// attaining the minimum.
int sq_distances(const double* y, const MeanConfig& c, std::vector<double>& dist) {
  const int K = c.K();
  const int d = c.d();
  dist.resize(K);
  int best = 0;
  for (int l = 0; l < K; ++l) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double diff = y[k] - c(l, k);
      s += diff * diff;
    }
    dist[l] = s;
    if (s < dist[best]) best = l;
  }
  return best;
}

// log sum_l exp(-(dist_l - dist_min) / (2 tau^2)); always >= 0.
double shifted_log_sum_exp(const std::vector<double>& dist, double dist_min, double inv_two_tau_sq) {
  double s = 0.0;
  for (double v : dist) s += std::exp(-(v - dist_min) * inv_two_tau_sq);
  return std::log(s);
}

std::string describe(const MeanConfig& c) {
  std::ostringstream os;
  os << "candidate [";
  for (int l = 0; l < c.K(); ++l) {
    os << (l ? "; " : "");
    for (int k = 0; k < c.d(); ++k) os << (k ? ", " : "") << c(l, k);
  }
  os << "]";
  return os.str();
}

void check_tau(double tau, const MixtureModel& truth) {
  require(std::isfinite(tau) && tau > 0.0, "tau must be positive and finite");
  if (tau < kMinTauRatio * truth.sigma)
    throw NumericalError("tau underflow: tau < 1e-12 sigma");
}

void check_candidate(const MeanConfig& candidate, const MixtureModel& truth) {
  require(candidate.d() == truth.d(), "candidate and truth dimensions differ");
}

ObjectiveValue finish(const NodeSet& nodes, const std::vector<double>& values) {
  const WeightedEstimate est = weighted_estimate(nodes, values);
  return {est.mean, est.std_error, nodes.size()};
}

}  // namespace

PopulationEngine::PopulationEngine(MixtureModel truth, const FitSpec& spec)
    : truth_(std::move(truth)) {
  quad_.nodes_per_component = spec.quadrature_nodes;
  if (!uses_quadrature()) {
    require(spec.mc_samples >= 10'000, "mc_samples must be at least 1e4 on the Monte Carlo path");
    pool_ = monte_carlo_pool(truth_, spec.mc_samples, spec.seed);
  }
}

double PopulationEngine::default_tol() const {
  return (uses_quadrature() ? 1e-8 : 1e-4) * std::max(truth_.means.frobenius_norm(), 1e-300);
}

const NodeSet& PopulationEngine::nodes(const MeanConfig& candidate, double tau) {
  if (!uses_quadrature()) return pool_;
  scratch_ = quadrature_nodes_1d(truth_, &candidate, tau, quad_);
  return scratch_;
}

ObjectiveValue PopulationEngine::nll(const MeanConfig& candidate, double tau) {
  check_candidate(candidate, truth_);
  check_tau(tau, truth_);
  const NodeSet& ns = nodes(candidate, tau);
  const double inv = 1.0 / (2.0 * tau * tau);
  const double c0 = 0.5 * truth_.d() * std::log(2.0 * std::numbers::pi * tau * tau) +
                    std::log(static_cast<double>(candidate.K()));
  std::vector<double> dist, values(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int best = sq_distances(ns.points.row(static_cast<Eigen::Index>(i)).data(), candidate, dist);
    const double m = dist[best];
    values[i] = c0 + m * inv - shifted_log_sum_exp(dist, m, inv);
    if (!std::isfinite(values[i]))
      throw NumericalError("population_nll: non-finite integrand at " + describe(candidate));
  }
  return finish(ns, values);
}

ObjectiveValue PopulationEngine::kmeans_risk(const MeanConfig& candidate) {
  check_candidate(candidate, truth_);
  const NodeSet& ns = nodes(candidate, 0.0);
  std::vector<double> dist, values(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int best = sq_distances(ns.points.row(static_cast<Eigen::Index>(i)).data(), candidate, dist);
    values[i] = dist[best];
    if (!std::isfinite(values[i]))
      throw NumericalError("population_kmeans_risk: non-finite integrand at " + describe(candidate));
  }
  return finish(ns, values);
}

ObjectiveValue PopulationEngine::rtau(const MeanConfig& candidate, double tau) {
  check_candidate(candidate, truth_);
  check_tau(tau, truth_);
  const NodeSet& ns = nodes(candidate, tau);
  const double inv = 1.0 / (2.0 * tau * tau);
  std::vector<double> dist, values(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int best = sq_distances(ns.points.row(static_cast<Eigen::Index>(i)).data(), candidate, dist);
    values[i] = -shifted_log_sum_exp(dist, dist[best], inv);
    if (!std::isfinite(values[i]))
      throw NumericalError("rtau_remainder: non-finite integrand at " + describe(candidate));
  }
  return finish(ns, values);
}

PopulationEngine::Step PopulationEngine::em_step(const MeanConfig& candidate, double tau) {
  check_candidate(candidate, truth_);
  check_tau(tau, truth_);
  const NodeSet& ns = nodes(candidate, tau);
  const int K = candidate.K();
  const int d = candidate.d();
  const double inv = 1.0 / (2.0 * tau * tau);
  const double c0 = 0.5 * d * std::log(2.0 * std::numbers::pi * tau * tau) + std::log(static_cast<double>(K));

  std::vector<double> mass(K, 0.0);
  RowMatrix first(RowMatrix::Zero(K, d));
  std::vector<double> dist, values(ns.size()), gamma(K);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double* y = ns.points.row(static_cast<Eigen::Index>(i)).data();
    const int best = sq_distances(y, candidate, dist);
    const double m = dist[best];
    double total = 0.0;
    for (int l = 0; l < K; ++l) total += (gamma[l] = std::exp(-(dist[l] - m) * inv));
    values[i] = c0 + m * inv - std::log(total);
    if (!std::isfinite(values[i]))
      throw NumericalError("population EM: non-finite integrand at " + describe(candidate));
    const double w = ns.weights[i];
    for (int l = 0; l < K; ++l) {
      const double g = w * gamma[l] / total;
      mass[l] += g;
      for (int k = 0; k < d; ++k) first(l, k) += g * y[k];
    }
  }

  Step step{finish(ns, values), candidate, MeanConfig(K, d), 0};
  for (int l = 0; l < K; ++l) {
    for (int k = 0; k < d; ++k) step.gradient(l, k) = (mass[l] * candidate(l, k) - first(l, k)) * 2.0 * inv;
    if (mass[l] > 0.0) {
      step.next.mean(l) = first.row(l) / mass[l];
    } else {
      ++step.frozen;
    }
  }
  return step;
}

PopulationEngine::Step PopulationEngine::lloyd_step(const MeanConfig& candidate) {
  check_candidate(candidate, truth_);
  const NodeSet& ns = nodes(candidate, 0.0);
  const int K = candidate.K();
  const int d = candidate.d();
  std::vector<double> mass(K, 0.0);
  RowMatrix first(RowMatrix::Zero(K, d));
  std::vector<double> dist, values(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double* y = ns.points.row(static_cast<Eigen::Index>(i)).data();
    const int best = sq_distances(y, candidate, dist);
    values[i] = dist[best];
    const double w = ns.weights[i];
    mass[best] += w;
    for (int k = 0; k < d; ++k) first(best, k) += w * y[k];
  }
  Step step{finish(ns, values), candidate, MeanConfig(K, d), 0};
  for (int l = 0; l < K; ++l) {
    if (mass[l] > 0.0) {
      step.next.mean(l) = first.row(l) / mass[l];
      step.gradient.mean(l) = 2.0 * (mass[l] * candidate.mean(l) - first.row(l));
    } else {
      ++step.frozen;
    }
  }
  return step;
}

ObjectiveValue population_nll(const MeanConfig& candidate, double tau, const MixtureModel& truth,
                              const FitSpec& spec) {
  PopulationEngine engine(truth, spec);
  return engine.nll(candidate, tau);
}

ObjectiveValue population_kmeans_risk(const MeanConfig& candidate, const MixtureModel& truth,
                                      const FitSpec& spec) {
  PopulationEngine engine(truth, spec);
  return engine.kmeans_risk(candidate);
}

ObjectiveValue rtau_remainder(const MeanConfig& candidate, double tau, const MixtureModel& truth,
                              const FitSpec& spec) {
  PopulationEngine engine(truth, spec);
  return engine.rtau(candidate, tau);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,objective,std_error,perm_dist_to_truth,perm_dist_step\n";
  out.precision(17);
  for (const auto& row : trace)
    out << row.iter << ',' << row.objective << ',' << row.std_error << ',' << row.perm_dist_to_truth
        << ',' << row.perm_dist_step << '\n';
}

namespace {

double increase_noise(const ObjectiveValue& a, const ObjectiveValue& b) {
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  return std::max(3.0 * se, 1e-12 * (1.0 + std::fabs(a.value)));
}

TraceRow make_row(int iter, const ObjectiveValue& obj, const MeanConfig& means,
                  const MeanConfig& truth, double step) {
  return {iter, obj.value, obj.std_error, perm_distance(means, truth), step};
}

enum class Map { Em, DampedGradient, Lloyd };

PopulationFit iterate(PopulationEngine& engine, const FitSpec& spec, const MeanConfig& init, Map map) {
  const MixtureModel& truth = engine.truth();
  require(init.K() == truth.K() && init.d() == truth.d(),
          "population fit: init must have the truth's K and d");
  require(spec.max_iters >= 1, "population fit: max_iters must be at least 1");
  const double tol = spec.tol > 0.0 ? spec.tol : engine.default_tol();
  const double tau = spec.tau;
  auto evaluate = [&](const MeanConfig& c) {
    return map == Map::Lloyd ? engine.lloyd_step(c) : engine.em_step(c, tau);
  };

  PopulationFit fit;
  fit.means = init;
  auto current = evaluate(fit.means);
  fit.frozen_events += current.frozen;
  fit.trace.push_back(make_row(0, current.objective, fit.means, truth.means, 0.0));

  double learning_rate = 1.0;
  int increases = 0;
  for (int it = 1; it <= spec.max_iters; ++it) {
    MeanConfig next = current.next;
    PopulationEngine::Step candidate_step;
    if (map == Map::DampedGradient) {
      // Backtracking on the objective along the scaled gradient.
      const double scale = tau * tau * truth.K();
      bool accepted = false;
      for (int attempt = 0; attempt < 40; ++attempt) {
        next = MeanConfig(RowMatrix(fit.means.matrix() - learning_rate * scale * current.gradient.matrix()));
        candidate_step = evaluate(next);
        if (candidate_step.objective.value <= current.objective.value + increase_noise(current.objective, candidate_step.objective)) {
          accepted = true;
          break;
        }
        learning_rate *= 0.5;
      }
      if (!accepted) break;
      learning_rate = std::min(learning_rate * 1.5, 4.0);
    } else {
      candidate_step = evaluate(next);
    }

    const double step = perm_distance(next, fit.means);
    if (candidate_step.objective.value > current.objective.value + increase_noise(current.objective, candidate_step.objective)) {
      ++increases;
    } else {
      increases = 0;
    }
    fit.means = std::move(next);
    current = std::move(candidate_step);
    fit.frozen_events += current.frozen;
    fit.iterations = it;
    fit.trace.push_back(make_row(it, current.objective, fit.means, truth.means, step));
    if (increases >= 5) {
      fit.diverged = true;
      break;
    }
    if (step < tol) {
      fit.converged = true;
      break;
    }
  }
  fit.objective = current.objective;
  return fit;
}

}  // namespace

PopulationFit quasi_mle(PopulationEngine& engine, const FitSpec& spec, const MeanConfig& init) {
  check_tau(spec.tau, engine.truth());
  return iterate(engine, spec, init,
                 spec.optimizer == PopulationOptimizer::DampedGradient ? Map::DampedGradient : Map::Em);
}

PopulationFit quasi_mle(const MixtureModel& truth, const FitSpec& spec, const MeanConfig& init) {
  PopulationEngine engine(truth, spec);
  return quasi_mle(engine, spec, init);
}

PopulationFit hard_assignment_target(PopulationEngine& engine, const FitSpec& spec,
                                     const MeanConfig& init) {
  return iterate(engine, spec, init, Map::Lloyd);
}

PopulationFit hard_assignment_target(const MixtureModel& truth, const FitSpec& spec,
                                     const MeanConfig& init) {
  PopulationEngine engine(truth, spec);
  return hard_assignment_target(engine, spec, init);
}

MultiStartFit quasi_mle_multistart(const MixtureModel& truth, const FitSpec& spec,
                                   std::uint64_t seed) {
  PopulationEngine engine(truth, spec);
  MeanConfig random_init(truth.K(), truth.d());
  const std::uint64_t draw_seed = derive_seed(seed, {0x5354415254ull});
  for (int l = 0; l < truth.K(); ++l) {
    std::vector<double> y(truth.d());
    draw_observation(truth, draw_seed, static_cast<std::uint64_t>(l), y);
    for (int k = 0; k < truth.d(); ++k) random_init(l, k) = y[k];
  }
  const MeanConfig inits[] = {truth.means, truth.means.scaled(0.01), random_init};

  MultiStartFit out;
  for (int s = 0; s < 3; ++s) {
    out.runs.push_back(quasi_mle(engine, spec, inits[s]));
    const auto& run = out.runs.back();
    const auto& best = out.runs[out.best_start];
    if (s > 0 && run.objective.value < best.objective.value - 1e-14 * (1.0 + std::fabs(best.objective.value)))
      out.best_start = s;
  }
  out.best = out.runs[out.best_start];
  return out;
}

Eigen::MatrixXd helmert_basis(int K) {
  require(K >= 1, "helmert_basis: K must be positive");
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(K - 1, K);
  for (int m = 1; m < K; ++m) {
    const double norm = std::sqrt(static_cast<double>(m) * (m + 1));
    for (int j = 0; j < m; ++j) basis(m - 1, j) = 1.0 / norm;
    basis(m - 1, m) = -static_cast<double>(m) / norm;
  }
  return basis;
}

Eigen::MatrixXd HessianBlocks::full() const {
  const auto d = diag_block.rows();
  Eigen::MatrixXd H(K * d, K * d);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) H.block(a * d, b * d, d, d) = (a == b) ? diag_block : offdiag_block;
  return H;
}

HessianBlocks hessian_at_origin(double tau, const Eigen::MatrixXd& second_moment, int K) {
  require(std::isfinite(tau) && tau > 0.0, "hessian_at_origin: tau must be positive");
  require(K >= 1, "hessian_at_origin: K must be positive");
  require(second_moment.rows() == second_moment.cols() && second_moment.rows() >= 1,
          "hessian_at_origin: second moment must be square");
  const double scale = std::max(1.0, second_moment.cwiseAbs().maxCoeff());
  require((second_moment - second_moment.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "hessian_at_origin: second moment must be symmetric");

  const auto d = second_moment.rows();
  const double t2 = tau * tau;
  const double t4 = t2 * t2;
  const double k = K;
  HessianBlocks h;
  h.K = K;
  h.diag_block = Eigen::MatrixXd::Identity(d, d) / (k * t2) - (k - 1.0) * second_moment / (k * k * t4);
  h.offdiag_block = second_moment / (k * k * t4);

  const Eigen::MatrixXd H = h.full();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

  // Common-shift subspace: h = (u, ..., u); curvature per ||u||^2 is
  // K times the Rayleigh quotient on the normalized basis.
  Eigen::MatrixXd shift_basis(K * d, d);
  for (int a = 0; a < K; ++a) shift_basis.block(a * d, 0, d, d) = identity / std::sqrt(k);
  const Eigen::MatrixXd shift_proj = shift_basis.transpose() * H * shift_basis;
  h.common_shift_min_eig =
      k * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(shift_proj, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();

  if (K >= 2) {
    const Eigen::MatrixXd helmert = helmert_basis(K);
    Eigen::MatrixXd zero_sum_basis(K * d, (K - 1) * d);
    for (int m = 0; m < K - 1; ++m)
      for (int a = 0; a < K; ++a) zero_sum_basis.block(a * d, m * d, d, d) = helmert(m, a) * identity;
    const Eigen::MatrixXd proj = zero_sum_basis.transpose() * H * zero_sum_basis;
    h.zero_sum_min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(proj, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  }
  return h;
}

CollapseReport collapse_report(const MixtureModel& truth) {
  require(truth.K() >= 2, "collapse_report: K must be at least 2");
  require(truth.sigma > 0.0, "collapse_report: sigma must be positive");
  const GeometrySummary g = geometry(truth);
  CollapseReport r;
  r.lambda_max = g.lambda_max;
  r.snr = g.snr;
  r.d = truth.d();
  r.rho_sq_threshold = 1.0 + g.lambda_max / (truth.sigma * truth.sigma);
  return r;
}

MeanConfig make_regular_simplex(int K, int d, double beta) {
  require(K >= 3, "make_regular_simplex: K must be at least 3");
  require(d >= K - 1, "make_regular_simplex: d must be at least K-1");
  require(beta > 0.0, "make_regular_simplex: beta must be positive");
  const Eigen::MatrixXd helmert = helmert_basis(K);
  const double norm = std::sqrt((K - 1.0) / K);
  MeanConfig out(K, d);
  for (int l = 0; l < K; ++l)
    for (int m = 0; m < K - 1; ++m) out(l, m) = beta * helmert(m, l) / norm;
  return out;
}

}  // namespace mismix
