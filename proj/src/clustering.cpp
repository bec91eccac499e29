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

#include "mismix/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "mismix/error.hpp"
#include "mismix/parallel.hpp"
#include "mismix/special_functions.hpp"

namespace mismix {

int bayes_classify(std::span<const double> y, const MeanConfig& means) {
  require(static_cast<int>(y.size()) == means.d(), "bayes_classify: dimension mismatch");
  int best = 0;
  double best_dist = 0.0;
  for (int l = 0; l < means.K(); ++l) {
    double s = 0.0;
    for (int k = 0; k < means.d(); ++k) {
      const double diff = y[k] - means(l, k);
      s += diff * diff;
    }
    if (l == 0 || s < best_dist) {
      best = l;
      best_dist = s;
    }
  }
  return best;
}

ErrorEstimate bayes_error_mc(const MixtureModel& model, std::size_t n, std::uint64_t seed, int workers) {
  require(n >= 1000, "bayes_error_mc: n must be at least 1000");
  std::vector<std::size_t> errors(chunk_count(n), 0);
  parallel_for(errors.size(), workers, [&](std::size_t chunk) {
    std::vector<double> y(model.d());
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      const int label = draw_observation(model, seed, i, y);
      if (bayes_classify(y, model.means) != label) ++errors[chunk];
    }
  });
  std::size_t total = 0;
  for (auto e : errors) total += e;
  ErrorEstimate est;
  est.n_trials = n;
  est.p_err = static_cast<double>(total) / static_cast<double>(n);
  est.std_error = std::sqrt(est.p_err * (1.0 - est.p_err) / static_cast<double>(n));
  return est;
}

BoundPair error_bounds(const MixtureModel& model) {
  require(model.K() >= 2, "error_bounds: K must be at least 2");
  require(model.sigma > 0.0, "error_bounds: sigma must be positive");
  const int K = model.K();
  const GeometrySummary g = geometry(model);
  const double trivial = 1.0 - 1.0 / K;
  const double s2 = model.sigma * model.sigma;

  BoundPair b;
  b.mi_upper = 0.5 * g.snr;
  b.lower = std::clamp(trivial - 0.5 * std::sqrt(g.snr), 0.0, trivial);

  double pairwise = 0.0;
  double mills = 0.0;
  for (int l = 0; l < K; ++l) {
    for (int j = 0; j < K; ++j) {
      if (j == l) continue;
      const double delta = (model.means.mean(l) - model.means.mean(j)).norm();
      const double exponent = std::exp(-delta * delta / (8.0 * s2));
      pairwise += exponent;
      const double x = delta / (2.0 * model.sigma);
      mills += x > 0.0 ? exponent / (x * std::sqrt(2.0 * std::numbers::pi)) : 1.0;
    }
  }
  b.pairwise_sum = pairwise / (2.0 * K);
  b.mills_refined = mills / K;
  b.min_separation = 0.5 * (K - 1) * std::exp(-g.delta_min * g.delta_min / (8.0 * s2));
  b.upper = std::clamp(std::min(b.pairwise_sum, b.min_separation), 0.0, trivial);
  return b;
}

void write_clustering_csv(std::ostream& out, const std::vector<ClusteringRow>& rows) {
  out << "snr,p_err,std_err,lower,upper,mi_upper\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.snr << ',' << r.estimate.p_err << ',' << r.estimate.std_error << ',' << r.bounds.lower << ','
        << r.bounds.upper << ',' << r.bounds.mi_upper << '\n';
}

}  // namespace mismix
