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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mismix/error.hpp"
#include "mismix/estimators.hpp"
#include "mismix/population.hpp"

using namespace mismix;

namespace {

const MixtureModel kThree(MeanConfig::from_rows({{2.0, 0.0}, {-1.0, 1.5}, {-1.0, -1.5}}), 0.6);

EmConfig truth_init(double tau, const MeanConfig& init) {
  EmConfig cfg;
  cfg.tau = tau;
  cfg.init_means = init;
  return cfg;
}

}  // namespace

TEST_CASE("empirical objectives on a hand-sized sample") {
  Observations y(3, 1);
  y << 0.0, 1.0, 3.0;
  const MeanConfig m = MeanConfig::from_rows({{0.0}, {2.0}});
  CHECK(empirical_kmeans_objective(y, m) == doctest::Approx((0.0 + 1.0 + 1.0) / 3.0));
  double expected = 0.0;
  for (double v : {0.0, 1.0, 3.0}) {
    const double p = 0.5 * (std::exp(-v * v / 2) + std::exp(-(v - 2) * (v - 2) / 2)) / std::sqrt(2 * std::numbers::pi);
    expected -= std::log(p) / 3.0;
  }
  CHECK(empirical_objective(y, m, 1.0) == doctest::Approx(expected).epsilon(1e-14));
  const auto labels = nearest_center_labels(y, m);
  CHECK(labels == std::vector<int>{0, 0, 1});
}

TEST_CASE("em objective trace never increases") {
  const LabeledSample s = sample_gmm(kThree, 20000, 1);
  EmConfig cfg = truth_init(0.9, MeanConfig::from_rows({{0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}}));
  cfg.max_iters = 200;
  const FitResult fit = em_fit(s.observations, 3, cfg, 0);
  REQUIRE(fit.objective_trace.size() == static_cast<std::size_t>(fit.iters_used) + 1);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
    CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1] + 1e-12);
  CHECK(fit.final_objective == fit.objective_trace.back());
}

TEST_CASE("em at the true variance is consistent") {
  const LabeledSample s = sample_gmm(kThree, 100000, 2);
  const FitResult fit = em_fit(s.observations, 3, truth_init(0.6, kThree.means), 0);
  CHECK(fit.converged);
  CHECK(normalized_mse(fit.means, kThree.means) < 1e-3);
}

TEST_CASE("lloyd stops on a stable partition and lowers the risk") {
  const LabeledSample s = sample_gmm(kThree, 20000, 3);
  EmConfig cfg = truth_init(1.0, MeanConfig::from_rows({{1.0, 1.0}, {-2.0, 0.0}, {0.0, -2.0}}));
  const FitResult fit = lloyd_fit(s.observations, 3, cfg, 0);
  CHECK(fit.converged);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
    CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1] + 1e-12);

  // Restarting at the fixed point finishes at once.
  const FitResult again = lloyd_fit(s.observations, 3, truth_init(1.0, fit.means), 0);
  CHECK(again.converged);
  CHECK(again.iters_used == 1);
  CHECK(again.means == fit.means);
}

TEST_CASE("results do not depend on the worker count") {
  const LabeledSample s = sample_gmm(kThree, 70000, 4);
  EmConfig cfg = truth_init(0.8, kThree.means);
  cfg.max_iters = 20;
  cfg.workers = 1;
  const FitResult a = em_fit(s.observations, 3, cfg, 0);
  const FitResult la = lloyd_fit(s.observations, 3, cfg, 0);
  cfg.workers = 3;
  const FitResult b = em_fit(s.observations, 3, cfg, 0);
  const FitResult lb = lloyd_fit(s.observations, 3, cfg, 0);
  CHECK(a.means == b.means);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(la.means == lb.means);
}

TEST_CASE("initializers") {
  const LabeledSample s = sample_gmm(kThree, 5000, 5);
  EmConfig cfg;
  cfg.init = InitMethod::RandomFromData;
  const MeanConfig r = initial_means(s.observations, 3, cfg, 8);
  CHECK(r == initial_means(s.observations, 3, cfg, 8));
  for (int l = 0; l < 3; ++l) {
    bool found = false;
    for (Eigen::Index i = 0; i < s.observations.rows() && !found; ++i) found = s.observations.row(i) == r.mean(l);
    CHECK(found);
  }
  cfg.init = InitMethod::KmeansPlusPlus;
  const MeanConfig pp = initial_means(s.observations, 3, cfg, 8);
  CHECK(pp.delta_min() > 0.0);

  cfg.init = InitMethod::Truth;
  CHECK_THROWS_AS(initial_means(s.observations, 3, cfg, 8), InvalidArgument);
  cfg.init_means = MeanConfig::from_rows({{0.0}, {1.0}});
  CHECK_THROWS_AS(initial_means(s.observations, 2, cfg, 8), InvalidArgument);
}

TEST_CASE("an empty cluster is frozen rather than moved") {
  Observations y(4, 1);
  y << -1.0, -1.1, 1.0, 1.1;
  const FitResult fit = lloyd_fit(y, 3, truth_init(1.0, MeanConfig::from_rows({{-1.0}, {1.0}, {50.0}})), 0);
  CHECK(fit.means(2, 0) == 50.0);
  CHECK(fit.frozen_events > 0);
}

TEST_CASE("trace csv") {
  FitResult fit;
  fit.objective_trace = {2.5, 1.25};
  std::ostringstream out;
  write_fit_trace_csv(out, fit);
  CHECK(out.str() == "iter,objective\n0,2.5\n1,1.25\n");
}

TEST_CASE("worked examples") {
  Observations one(1, 2);
  one << 0.5, -1.0;
  const MeanConfig m = MeanConfig::from_rows({{1.5, 1.0}});
  CHECK(empirical_objective(one, m, 0.7) ==
        doctest::Approx(std::log(2 * std::numbers::pi * 0.49) + 5.0 / (2 * 0.49)).epsilon(1e-14));

  // Repeated distinct points with a small tau are a fixed point.
  Observations rep(30, 1);
  for (int i = 0; i < 30; ++i) rep(i, 0) = (i % 3) * 4.0;
  const MeanConfig pts = MeanConfig::from_rows({{0.0}, {4.0}, {8.0}});
  const FitResult em = em_fit(rep, 3, truth_init(0.05, pts), 0);
  CHECK(em.converged);
  CHECK(em.iters_used == 1);
  CHECK(em.means == pts);

  const MixtureModel noiseless(MeanConfig::from_rows({{1.0}, {-1.0}}), 0.0);
  const LabeledSample s = sample_gmm(noiseless, 100, 3);
  const FitResult ll = lloyd_fit(s.observations, 2, truth_init(1.0, noiseless.means), 0);
  CHECK(ll.means == noiseless.means);
  CHECK(ll.final_objective == 0.0);
}

TEST_CASE("million-sample fits at unit snr") {
  const MixtureModel k2(MeanConfig::from_rows({{1.0}, {-1.0}}), 1.0);
  const LabeledSample s = sample_gmm(k2, 1000000, 41);
  const FitResult em = em_fit(s.observations, 2, truth_init(1.0, k2.means), 0);
  CHECK(normalized_mse(em.means, k2.means) <= 1e-3);
  const FitResult ll = lloyd_fit(s.observations, 2, truth_init(1.0, k2.means), 0);
  CHECK(normalized_mse(ll.means, k2.means) == doctest::Approx(0.027765870556990).epsilon(0.1));
}

TEST_CASE("empirical objective: large-sample limit and additivity") {
  const MixtureModel k2(MeanConfig::from_rows({{1.0}, {-1.0}}), 1.0);
  const LabeledSample s = sample_gmm(k2, 1000000, 43);
  std::vector<double> terms(s.size());
  Observations row(1, 1);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < s.size(); i += 1) {
    row(0, 0) = s.observations(i, 0);
    if (i < 2000) {
      terms[i] = empirical_objective(row, k2.means, 1.0);
      sum += terms[i];
      sum2 += terms[i] * terms[i];
    }
  }
  const double sd = std::sqrt(sum2 / 2000 - (sum / 2000) * (sum / 2000));
  const double value = empirical_objective(s.observations, k2.means, 1.0);
  CHECK(std::abs(value - 1.75576935355150435) <= 4 * sd / 1000.0);

  const Observations a = s.observations.topRows(5000);
  const Observations b = s.observations.middleRows(5000, 5000);
  Observations both(10000, 1);
  both << a, b;
  CHECK(empirical_objective(both, k2.means, 0.8) ==
        doctest::Approx(0.5 * (empirical_objective(a, k2.means, 0.8) + empirical_objective(b, k2.means, 0.8)))
            .epsilon(1e-13));
}

TEST_CASE("soft assignment at small tau matches lloyd on separated data") {
  const MixtureModel model(make_regular_simplex(3, 2, 1.0), 0.1 * std::sqrt(3.0));
  const LabeledSample s = sample_gmm(model, 20000, 6);
  const FitResult ll = lloyd_fit(s.observations, 3, truth_init(1.0, model.means), 0);
  EmConfig cfg = truth_init(model.sigma / 32, model.means);
  const FitResult em = em_fit(s.observations, 3, cfg, 0);
  CHECK(perm_distance(em.means, ll.means) <= 1e-3 * model.means.frobenius_norm());
}

TEST_CASE("equivariance and determinism") {
  const LabeledSample s = sample_gmm(kThree, 20000, 8);
  const MeanConfig init = MeanConfig::from_rows({{1.5, 0.2}, {-0.7, 1.0}, {-1.2, -1.0}});
  const FitResult base = em_fit(s.observations, 3, truth_init(0.8, init), 0);
  CHECK(em_fit(s.observations, 3, truth_init(0.8, init), 0).means == base.means);

  const int order[] = {2, 0, 1};
  const FitResult perm = em_fit(s.observations, 3, truth_init(0.8, init.permuted(order)), 0);
  CHECK((perm.means.matrix() - base.means.permuted(order).matrix()).norm() < 1e-10);

  const Eigen::Vector2d v(3.0, -2.0);
  Observations shifted = s.observations;
  shifted.rowwise() += v.transpose();
  const FitResult moved = em_fit(shifted, 3, truth_init(0.8, init.translated(v)), 0);
  CHECK((moved.means.matrix() - base.means.translated(v).matrix()).norm() < 1e-10);
}
