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

#include "mismix/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "mismix/error.hpp"
#include "mismix/parallel.hpp"
#include "mismix/random.hpp"

namespace mismix {
namespace {

// Per-chunk partial sums, reduced in chunk order.
struct Partial {
  std::vector<double> mass;
  RowMatrix first;
  double objective = 0.0;
};

struct Pass {
  std::vector<double> mass;
  RowMatrix first;
  double objective = 0.0;  // mean over observations
};

template <class PerObservation>
Pass reduce_chunks(const Observations& data, int K, int workers, PerObservation&& per_obs) {
  const auto n = static_cast<std::size_t>(data.rows());
  const int d = static_cast<int>(data.cols());
  std::vector<Partial> partials(chunk_count(n));
  parallel_for(partials.size(), workers, [&](std::size_t chunk) {
    Partial& p = partials[chunk];
    p.mass.assign(K, 0.0);
    p.first = RowMatrix::Zero(K, d);
    std::vector<double> scratch(K);
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i)
      p.objective += per_obs(data.row(static_cast<Eigen::Index>(i)).data(), i, scratch, p);
  });
  Pass pass{std::vector<double>(K, 0.0), RowMatrix::Zero(K, d), 0.0};
  for (const auto& p : partials) {
    for (int l = 0; l < K; ++l) pass.mass[l] += p.mass[l];
    pass.first += p.first;
    pass.objective += p.objective;
  }
  pass.objective /= static_cast<double>(n);
  return pass;
}

int fill_sq_distances(const double* y, const MeanConfig& means, std::vector<double>& dist) {
  int best = 0;
  for (int l = 0; l < means.K(); ++l) {
    double s = 0.0;
    for (int k = 0; k < means.d(); ++k) {
      const double diff = y[k] - means(l, k);
      s += diff * diff;
    }
    dist[l] = s;
    if (s < dist[best]) best = l;
  }
  return best;
}

Pass em_pass(const Observations& data, const MeanConfig& means, double tau, int workers) {
  const int K = means.K();
  const int d = means.d();
  const double inv = 1.0 / (2.0 * tau * tau);
  const double c0 = 0.5 * d * std::log(2.0 * std::numbers::pi * tau * tau) + std::log(static_cast<double>(K));
  return reduce_chunks(data, K, workers, [&](const double* y, std::size_t, std::vector<double>& dist, Partial& p) {
    const int best = fill_sq_distances(y, means, dist);
    const double m = dist[best];
    double total = 0.0;
    for (int l = 0; l < K; ++l) total += (dist[l] = std::exp(-(dist[l] - m) * inv));
    for (int l = 0; l < K; ++l) {
      const double g = dist[l] / total;
      p.mass[l] += g;
      for (int k = 0; k < d; ++k) p.first(l, k) += g * y[k];
    }
    return c0 + m * inv - std::log(total);
  });
}

Pass lloyd_pass(const Observations& data, const MeanConfig& means, std::vector<int>* labels, int workers) {
  const int K = means.K();
  const int d = means.d();
  return reduce_chunks(data, K, workers, [&](const double* y, std::size_t i, std::vector<double>& dist, Partial& p) {
    const int best = fill_sq_distances(y, means, dist);
    if (labels) (*labels)[i] = best;
    p.mass[best] += 1.0;
    for (int k = 0; k < d; ++k) p.first(best, k) += y[k];
    return dist[best];
  });
}

// Cell or responsibility means; components whose mass is below
// `min_mass` stay where they were.
MeanConfig update_means(const Pass& pass, const MeanConfig& previous, double min_mass, int& frozen) {
  MeanConfig next = previous;
  for (int l = 0; l < previous.K(); ++l) {
    if (pass.mass[l] > min_mass && pass.mass[l] > 0.0) {
      next.mean(l) = pass.first.row(l) / pass.mass[l];
    } else {
      ++frozen;
    }
  }
  return next;
}

void check_data(const Observations& data, int K) {
  require(K >= 1, "fit: K must be at least 1");
  require(data.rows() >= K, "fit: need at least K observations");
  require(data.cols() >= 1, "fit: observations must have dimension >= 1");
}

}  // namespace

MeanConfig initial_means(const Observations& data, int K, const EmConfig& cfg, std::uint64_t seed) {
  check_data(data, K);
  const auto n = static_cast<std::uint64_t>(data.rows());
  MeanConfig out(K, static_cast<int>(data.cols()));
  switch (cfg.init) {
    case InitMethod::Truth:
      require(cfg.init_means.has_value(), "init=truth requires init_means");
      require(cfg.init_means->K() == K && cfg.init_means->d() == data.cols(),
              "init_means shape does not match K and the data dimension");
      return *cfg.init_means;
    case InitMethod::RandomFromData: {
      CounterRng rng(seed, 0x494E4954ull);
      std::vector<std::uint64_t> chosen;
      while (static_cast<int>(chosen.size()) < K) {
        const std::uint64_t idx = rng.below(n);
        if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
      }
      for (int l = 0; l < K; ++l) out.mean(l) = data.row(static_cast<Eigen::Index>(chosen[l]));
      return out;
    }
    case InitMethod::KmeansPlusPlus: {
      CounterRng rng(seed, 0x4B4D5050ull);
      out.mean(0) = data.row(static_cast<Eigen::Index>(rng.below(n)));
      std::vector<double> best(n);
      for (std::uint64_t i = 0; i < n; ++i)
        best[i] = (data.row(static_cast<Eigen::Index>(i)) - out.mean(0)).squaredNorm();
      for (int l = 1; l < K; ++l) {
        double total = 0.0;
        for (double b : best) total += b;
        std::uint64_t pick = n - 1;
        if (total > 0.0) {
          double target = rng.uniform() * total;
          for (std::uint64_t i = 0; i < n; ++i) {
            target -= best[i];
            if (target <= 0.0) {
              pick = i;
              break;
            }
          }
        } else {
          pick = rng.below(n);
        }
        out.mean(l) = data.row(static_cast<Eigen::Index>(pick));
        for (std::uint64_t i = 0; i < n; ++i)
          best[i] = std::min(best[i], (data.row(static_cast<Eigen::Index>(i)) - out.mean(l)).squaredNorm());
      }
      return out;
    }
  }
  return out;
}

FitResult em_fit(const Observations& data, int K, const EmConfig& cfg, std::uint64_t seed) {
  check_data(data, K);
  require(cfg.tau > 0.0 && std::isfinite(cfg.tau), "em_fit: tau must be positive");
  require(cfg.max_iters >= 1, "em_fit: max_iters must be at least 1");
  const double min_mass = 1e-12 * static_cast<double>(data.rows());

  FitResult fit;
  fit.means = initial_means(data, K, cfg, seed);
  Pass pass = em_pass(data, fit.means, cfg.tau, cfg.workers);
  fit.objective_trace.push_back(pass.objective);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    MeanConfig next = update_means(pass, fit.means, min_mass, fit.frozen_events);
    Pass next_pass = em_pass(data, next, cfg.tau, cfg.workers);
    const double change = std::fabs(next_pass.objective - pass.objective);
    fit.means = std::move(next);
    pass = std::move(next_pass);
    fit.objective_trace.push_back(pass.objective);
    fit.iters_used = it;
    if (change < cfg.tol * std::max(std::fabs(pass.objective), 1e-300)) {
      fit.converged = true;
      break;
    }
  }
  fit.final_objective = pass.objective;
  return fit;
}

FitResult lloyd_fit(const Observations& data, int K, const EmConfig& cfg, std::uint64_t seed) {
  check_data(data, K);
  require(cfg.max_iters >= 1, "lloyd_fit: max_iters must be at least 1");
  const auto n = static_cast<std::size_t>(data.rows());

  FitResult fit;
  fit.means = initial_means(data, K, cfg, seed);
  std::vector<int> labels(n), next_labels(n);
  Pass pass = lloyd_pass(data, fit.means, &labels, cfg.workers);
  fit.objective_trace.push_back(pass.objective);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    MeanConfig next = update_means(pass, fit.means, 0.0, fit.frozen_events);
    Pass next_pass = lloyd_pass(data, next, &next_labels, cfg.workers);
    fit.means = std::move(next);
    pass = std::move(next_pass);
    fit.objective_trace.push_back(pass.objective);
    fit.iters_used = it;
    const bool unchanged = next_labels == labels;
    labels.swap(next_labels);
    if (unchanged) {
      fit.converged = true;
      break;
    }
  }
  fit.final_objective = pass.objective;
  return fit;
}

std::vector<int> nearest_center_labels(const Observations& data, const MeanConfig& means, int workers) {
  require(data.cols() == means.d(), "nearest_center_labels: dimension mismatch");
  std::vector<int> labels(static_cast<std::size_t>(data.rows()));
  lloyd_pass(data, means, &labels, workers);
  return labels;
}

double empirical_objective(const Observations& data, const MeanConfig& means, double tau, int workers) {
  require(data.rows() >= 1 && data.cols() == means.d(), "empirical_objective: shape mismatch");
  require(tau > 0.0, "empirical_objective: tau must be positive");
  return em_pass(data, means, tau, workers).objective;
}

double empirical_kmeans_objective(const Observations& data, const MeanConfig& means, int workers) {
  require(data.rows() >= 1 && data.cols() == means.d(), "empirical_kmeans_objective: shape mismatch");
  return lloyd_pass(data, means, nullptr, workers).objective;
}

void write_fit_trace_csv(std::ostream& out, const FitResult& fit) {
  out << "iter,objective\n";
  out.precision(17);
  for (std::size_t i = 0; i < fit.objective_trace.size(); ++i) out << i << ',' << fit.objective_trace[i] << '\n';
}

}  // namespace mismix
