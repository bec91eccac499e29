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
#include <optional>
#include <vector>

#include "mismix/core_model.hpp"

namespace mismix {

enum class InitMethod { Truth, RandomFromData, KmeansPlusPlus };

struct EmConfig {
  /// Fixed component standard deviation used by EM.
  double tau = 1.0;
  int max_iters = 300;
  /// EM stops when |objective change| < tol * |objective|.
  double tol = 1e-10;
  InitMethod init = InitMethod::Truth;
  /// Required when init == Truth.
  std::optional<MeanConfig> init_means;
  /// 0 selects default_workers().
  int workers = 0;
};

struct FitResult {
  MeanConfig means;
  int iters_used = 0;
  double final_objective = 0.0;
  /// Objective at the initial means followed by one entry per iteration.
  std::vector<double> objective_trace;
  bool converged = false;
  /// Number of (iteration, component) pairs left in place for lack of mass.
  int frozen_events = 0;
};

/// Starting means according to cfg.init; `seed` drives the random methods.
MeanConfig initial_means(const Observations& data, int K, const EmConfig& cfg, std::uint64_t seed);

/// EM for an equal-weight mixture with every variance fixed at tau^2.
FitResult em_fit(const Observations& data, int K, const EmConfig& cfg, std::uint64_t seed);

/// Lloyd's algorithm; stops when the partition no longer changes.
FitResult lloyd_fit(const Observations& data, int K, const EmConfig& cfg, std::uint64_t seed);

/// Nearest-center labels, lowest index on ties.
std::vector<int> nearest_center_labels(const Observations& data, const MeanConfig& means, int workers = 0);

/// -(1/n) sum_i log p_{means,tau}(y_i).
double empirical_objective(const Observations& data, const MeanConfig& means, double tau, int workers = 0);

/// (1/n) sum_i min_l ||y_i - mu_l||^2.
double empirical_kmeans_objective(const Observations& data, const MeanConfig& means, int workers = 0);

/// CSV "iter,objective".
void write_fit_trace_csv(std::ostream& out, const FitResult& fit);

}  // namespace mismix
