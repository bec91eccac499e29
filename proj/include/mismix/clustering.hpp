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
#include <span>
#include <vector>

#include "mismix/core_model.hpp"

namespace mismix {

struct ErrorEstimate {
  double p_err = 0.0;
  /// Binomial standard error sqrt(p(1-p)/n).
  double std_error = 0.0;
  std::size_t n_trials = 0;
};

struct BoundPair {
  /// max(0, 1 - 1/K - sqrt(SNR)/2), clamped to [0, 1 - 1/K].
  double lower = 0.0;
  /// Best exponential upper bound, clamped to [0, 1 - 1/K].
  double upper = 1.0;
  /// Upper bound SNR/2 on I(L;Y), nats.
  double mi_upper = 0.0;
  /// Unclamped components, kept for diagnostics.
  double pairwise_sum = 0.0;
  double min_separation = 0.0;
  /// Union bound with Gaussian Mills-ratio tails. Asymptotically sharper;
  /// diagnostic only.
  double mills_refined = 0.0;
};

/// Nearest mean, lowest index on ties.
int bayes_classify(std::span<const double> y, const MeanConfig& means);

/// Monte Carlo estimate of the Bayes misclassification probability from n
/// labelled draws keyed on `seed`.
ErrorEstimate bayes_error_mc(const MixtureModel& model, std::size_t n, std::uint64_t seed, int workers = 0);

BoundPair error_bounds(const MixtureModel& model);

struct ClusteringRow {
  double snr = 0.0;
  ErrorEstimate estimate;
  BoundPair bounds;
};

/// CSV "snr,p_err,std_err,lower,upper,mi_upper".
void write_clustering_csv(std::ostream& out, const std::vector<ClusteringRow>& rows);

}  // namespace mismix
