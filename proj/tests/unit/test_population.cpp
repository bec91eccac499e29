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
#include <random>
#include <sstream>

#include "mismix/error.hpp"
#include "mismix/population.hpp"
#include "support/oracles.hpp"

using namespace mismix;

namespace {

const MixtureModel kSym(MeanConfig::from_rows({{1.0}, {-1.0}}), 1.0);

FitSpec spec_with_tau(double tau) {
  FitSpec s;
  s.tau = tau;
  return s;
}

}  // namespace

TEST_CASE("population objectives against independent integrals") {
  // Reference values from 30-digit adaptive quadrature.
  const FitSpec s1 = spec_with_tau(1.0);
  CHECK(population_nll(kSym.means, 1.0, kSym, s1).value == doctest::Approx(1.75576935355150435).epsilon(1e-13));
  CHECK(population_nll(MeanConfig::from_rows({{0.7}, {-0.7}}), 0.5, kSym, s1).value ==
        doctest::Approx(2.56143354536986635).epsilon(1e-13));
  CHECK(population_nll(MeanConfig::from_rows({{1.3}, {-0.4}}), 0.8, kSym, s1).value ==
        doctest::Approx(1.91545477015429470).epsilon(1e-13));
  CHECK(population_kmeans_risk(kSym.means, kSym, s1).value == doctest::Approx(0.666738117649254806).epsilon(1e-13));
  CHECK(population_kmeans_risk(MeanConfig::from_rows({{1.3}, {-0.4}}), kSym, s1).value ==
        doctest::Approx(0.858447415594821956).epsilon(1e-13));

  const MixtureModel three(MeanConfig::from_rows({{-2.0}, {0.0}, {2.5}}), 0.8);
  CHECK(population_nll(MeanConfig::from_rows({{-1.5}, {0.3}, {2.0}}), 1.1, three, s1).value ==
        doctest::Approx(2.08147738635787320).epsilon(1e-13));
}

TEST_CASE("decomposition identity and remainder range") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> t(0.1, 3.0);
  const MixtureModel truth(MeanConfig::from_rows({{1.5}, {-0.5}, {-1.0}}), 0.7);
  PopulationEngine engine(truth, FitSpec{});
  for (int i = 0; i < 20; ++i) {
    const MeanConfig c = MeanConfig::from_rows({{z(gen)}, {z(gen)}, {z(gen)}});
    const double tau = t(gen);
    const double L = engine.nll(c, tau).value;
    const double phi = engine.kmeans_risk(c).value;
    const double r = engine.rtau(c, tau).value;
    CHECK(r <= 0.0);
    CHECK(r >= -std::log(3.0));
    CHECK(std::abs(L - 0.5 * std::log(2 * std::numbers::pi * tau * tau) - std::log(3.0) - phi / (2 * tau * tau) - r) <
          1e-10);
  }
}

TEST_CASE("remainder shrinks as tau decreases") {
  const MeanConfig c = MeanConfig::from_rows({{0.8}, {-1.2}});
  double prev = std::numeric_limits<double>::infinity();
  for (double tau : {1.0, 0.5, 0.25, 0.125}) {
    const double r = std::abs(rtau_remainder(c, tau, kSym, FitSpec{}).value);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("em step is a fixed point at the truth when tau equals sigma") {
  PopulationEngine engine(kSym, FitSpec{});
  const auto step = engine.em_step(kSym.means, 1.0);
  CHECK(perm_distance(step.next, kSym.means) < 1e-13);
  CHECK(step.gradient.frobenius_norm() < 1e-13);
}

TEST_CASE("population em decreases the objective monotonically") {
  const MixtureModel truth(MeanConfig::from_rows({{2.0}, {0.0}, {-2.0}}), 0.8);
  FitSpec spec = spec_with_tau(1.0);
  const PopulationFit fit = quasi_mle(truth, spec, MeanConfig::from_rows({{0.3}, {0.1}, {-0.2}}));
  REQUIRE(fit.trace.size() > 3);
  for (std::size_t i = 1; i < fit.trace.size(); ++i)
    CHECK(fit.trace[i].objective <= fit.trace[i - 1].objective + 1e-13);
  CHECK(fit.converged);
  CHECK_FALSE(fit.diverged);
}

TEST_CASE("correct specification recovers the truth") {
  const PopulationFit fit = quasi_mle(kSym, spec_with_tau(1.0), kSym.means);
  CHECK(normalized_mse(fit.means, kSym.means) <= 1e-10);
  const PopulationFit from_afar = quasi_mle(kSym, spec_with_tau(1.0), MeanConfig::from_rows({{0.2}, {-0.1}}));
  CHECK(normalized_mse(from_afar.means, kSym.means) <= 1e-10);
}

TEST_CASE("damped gradient reaches the same stationary point as em") {
  FitSpec spec = spec_with_tau(0.7);
  spec.tol = 1e-12;
  const PopulationFit em = quasi_mle(kSym, spec, kSym.means);
  spec.optimizer = PopulationOptimizer::DampedGradient;
  const PopulationFit gd = quasi_mle(kSym, spec, kSym.means);
  // The line search compares objective values, which stop resolving
  // distances much below sqrt(machine epsilon).
  CHECK(perm_distance(em.means, gd.means) < 1e-5);
}

TEST_CASE("population lloyd reaches the folded-normal center") {
  const PopulationFit fit = hard_assignment_target(kSym, FitSpec{}, kSym.means);
  CHECK(perm_distance(fit.means, MeanConfig::from_rows({{1.16663094117537260}, {-1.16663094117537260}})) < 1e-7);
  for (std::size_t i = 1; i < fit.trace.size(); ++i)
    CHECK(fit.trace[i].objective <= fit.trace[i - 1].objective + 1e-13);
}

TEST_CASE("monte carlo path matches a separable closed form") {
  // Second coordinate is pure noise, so L_tau splits into the d = 1 value
  // plus a Gaussian cross-entropy term.
  const MixtureModel truth(MeanConfig::from_rows({{1.0, 0.0}, {-1.0, 0.0}}), 1.0);
  FitSpec spec;
  spec.mc_samples = 200000;
  spec.seed = 17;
  const ObjectiveValue v = population_nll(truth.means, 1.0, truth, spec);
  const double expected = 1.75576935355150435 + 0.5 * std::log(2 * std::numbers::pi) + 0.5;
  CHECK(v.std_error > 0.0);
  CHECK(std::abs(v.value - expected) < 4 * v.std_error);
  CHECK(population_nll(truth.means, 1.0, truth, spec).value == v.value);
}

TEST_CASE("engine rejects unusable settings") {
  FitSpec tiny;
  tiny.mc_samples = 100;
  const MixtureModel two_d(MeanConfig::from_rows({{1.0, 0.0}, {-1.0, 0.0}}), 1.0);
  CHECK_THROWS_AS(PopulationEngine(two_d, tiny), InvalidArgument);
  CHECK_THROWS_AS(population_nll(kSym.means, 1e-14, kSym, FitSpec{}), NumericalError);
}

TEST_CASE("hessian blocks match finite differences") {
  for (auto [K, tau, spread] : {std::tuple{2, 1.0, 1.0}, {3, 0.8, 0.5}, {4, 1.5, 2.0}}) {
    MeanConfig means(K, 1);
    for (int l = 0; l < K; ++l) means(l, 0) = spread * (l - (K - 1) / 2.0);
    const MixtureModel truth(means, 0.9);
    PopulationEngine engine(truth, FitSpec{});
    const Eigen::MatrixXd M = geometry(truth).sigma_mu + Eigen::MatrixXd::Identity(1, 1) * 0.81;
    const HessianBlocks h = hessian_at_origin(tau, M, K);
    const Eigen::MatrixXd fd = oracle::finite_difference_hessian(
        [&](const MeanConfig& c) { return engine.nll(c, tau).value; }, MeanConfig(K, 1), 1e-3);
    CHECK((fd - h.full()).norm() / h.full().norm() < 1e-5);
  }
}

TEST_CASE("hessian spectra have closed forms") {
  Eigen::MatrixXd M(2, 2);
  M << 2.0, 0.5, 0.5, 1.0;
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues().maxCoeff();
  for (int K : {2, 3, 5}) {
    const double tau = 1.3;
    const HessianBlocks h = hessian_at_origin(tau, M, K);
    CHECK(h.zero_sum_min_eig == doctest::Approx((1.0 / tau / tau - lmax / std::pow(tau, 4)) / K).epsilon(1e-12));
    CHECK(h.common_shift_min_eig == doctest::Approx(1.0 / (tau * tau)).epsilon(1e-12));
    CHECK(h.full().isApprox(h.full().transpose()));
  }
  CHECK(std::isinf(hessian_at_origin(1.0, M, 1).zero_sum_min_eig));
  Eigen::MatrixXd asym = M;
  asym(0, 1) += 1e-3;
  CHECK_THROWS_AS(hessian_at_origin(1.0, asym, 2), InvalidArgument);
}

TEST_CASE("collapse thresholds") {
  const CollapseReport k2 = collapse_report(kSym);
  CHECK(k2.rho_sq_threshold == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(k2.is_stable_at(std::sqrt(2.01)));
  CHECK_FALSE(k2.is_stable_at(std::sqrt(1.99)));

  const CollapseReport simplex = collapse_report(MixtureModel(make_regular_simplex(3, 3, 1.0), 1.0));
  CHECK(simplex.rho_sq_threshold == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(simplex.within_bounds());

  std::mt19937_64 gen(9);
  std::normal_distribution<double> z;
  for (int i = 0; i < 10; ++i) {
    MeanConfig m(4, 3);
    for (int l = 0; l < 4; ++l)
      for (int k = 0; k < 3; ++k) m(l, k) = z(gen);
    CHECK(collapse_report(MixtureModel(m, 0.5 + i * 0.2)).within_bounds());
  }
  CHECK_THROWS_AS(collapse_report(MixtureModel(MeanConfig::from_rows({{1.0}}), 1.0)), InvalidArgument);
}

TEST_CASE("collapsed configuration attracts em above the threshold only") {
  FitSpec over = spec_with_tau(std::sqrt(2.5));
  const PopulationFit collapsed = quasi_mle(kSym, over, kSym.means.scaled(0.01));
  CHECK(collapsed.means.frobenius_norm() < 1e-4);
  FitSpec under = spec_with_tau(std::sqrt(1.5));
  const PopulationFit escaped = quasi_mle(kSym, under, kSym.means.scaled(0.01));
  CHECK(escaped.means.frobenius_norm() > 0.1);
}

TEST_CASE("regular simplex and helmert basis") {
  for (int K : {3, 4, 6}) {
    const MeanConfig s = make_regular_simplex(K, K + 1, 2.0);
    CHECK(s.centroid().norm() < 1e-14);
    for (int a = 0; a < K; ++a) {
      CHECK(s.mean(a).norm() == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(s(a, K) == 0.0);
      for (int b = a + 1; b < K; ++b)
        CHECK(s.mean(a).dot(s.mean(b)) == doctest::Approx(-4.0 / (K - 1)).epsilon(1e-13));
    }
    const Eigen::MatrixXd H = helmert_basis(K);
    CHECK((H * H.transpose()).isApprox(Eigen::MatrixXd::Identity(K - 1, K - 1), 1e-14));
    CHECK((H * Eigen::VectorXd::Ones(K)).norm() < 1e-14);
  }
  CHECK_THROWS_AS(make_regular_simplex(4, 2, 1.0), InvalidArgument);
}

TEST_CASE("multistart prefers lower objectives and breaks ties early") {
  FitSpec spec = spec_with_tau(1.0);
  const MultiStartFit fit = quasi_mle_multistart(kSym, spec, 5);
  REQUIRE(fit.runs.size() == 3);
  CHECK(fit.best_start == 0);
  CHECK(normalized_mse(fit.best.means, kSym.means) < 1e-10);
  for (const auto& run : fit.runs) CHECK(fit.best.objective.value <= run.objective.value + 1e-12);
}

TEST_CASE("quantization risk examples") {
  const MixtureModel truth(MeanConfig::from_rows({{2.0}, {-1.0}, {0.5}}), 0.7);
  const GeometrySummary g = geometry(truth);
  const MeanConfig centre{RowMatrix(g.mixture_mean.transpose())};
  CHECK(population_kmeans_risk(centre, truth, FitSpec{}).value ==
        doctest::Approx(0.49 + g.sigma_mu.trace()).epsilon(1e-12));

  const MixtureModel noiseless(MeanConfig::from_rows({{1.0}, {-1.0}}), 0.0);
  CHECK(population_kmeans_risk(noiseless.means, noiseless, FitSpec{}).value == 0.0);

  FitSpec mc;
  mc.mc_samples = 1000000;
  const MixtureModel two_d(MeanConfig::from_rows({{1.0, 0.0}, {-1.0, 0.0}}), 1.0);
  // Second coordinate adds sigma^2 to the d = 1 risk.
  const ObjectiveValue v = population_kmeans_risk(two_d.means, two_d, mc);
  CHECK(std::abs(v.value - (0.666738117649254806 + 1.0)) <= 5 * v.std_error);
}

TEST_CASE("remainder vanishes for a single component") {
  const MixtureModel one(MeanConfig::from_rows({{0.5}}), 1.0);
  CHECK(rtau_remainder(MeanConfig::from_rows({{0.1}}), 0.3, one, FitSpec{}).value == 0.0);
}

TEST_CASE("collapse from a shrunken start settles on the origin") {
  const PopulationFit fit = quasi_mle(kSym, spec_with_tau(std::sqrt(2.5)), kSym.means.scaled(0.01));
  PopulationEngine engine(kSym, FitSpec{});
  CHECK(fit.converged);
  CHECK(fit.means.frobenius_norm() < 10 * engine.default_tol());
}

TEST_CASE("under-smoothing floor grows like sigma squared at low snr") {
  double prev = 0.0;
  for (double sigma : {10.0, 20.0, 40.0}) {
    const MixtureModel truth(MeanConfig::from_rows({{1.0}, {-1.0}}), sigma);
    const PopulationFit fit = quasi_mle(truth, spec_with_tau(0.5 * sigma), truth.means);
    const double d2 = std::pow(perm_distance(fit.means, truth.means), 2);
    MESSAGE("sigma " << sigma << ": d_perm^2 / sigma^2 = " << d2 / (sigma * sigma));
    CHECK(d2 / (sigma * sigma) > 0.01);
    CHECK(d2 > prev);
    prev = d2;
  }
}

TEST_CASE("hard-assignment target approaches the truth as sigma vanishes") {
  const MixtureModel truth(MeanConfig::from_rows({{1.0}, {-1.0}}), 1e-3);
  const PopulationFit fit = hard_assignment_target(truth, FitSpec{}, truth.means);
  CHECK(perm_distance(fit.means, truth.means) <= 1e-4);
}

TEST_CASE("quasi-mle approaches the hard-assignment target as rho shrinks") {
  const PopulationFit ha = hard_assignment_target(kSym, FitSpec{}, kSym.means);
  double prev = std::numeric_limits<double>::infinity();
  for (double rho : {0.2, 0.1, 0.05}) {
    const PopulationFit fit = quasi_mle(kSym, spec_with_tau(rho), kSym.means);
    const double gap = perm_distance(fit.means, ha.means);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("zero-signal hessian along an antisymmetric direction") {
  for (double tau : {0.3, 0.7, 0.95}) {
    const HessianBlocks h = hessian_at_origin(tau, Eigen::MatrixXd::Identity(1, 1), 2);
    Eigen::Vector2d dir(0.6, -0.6);
    const double q = dir.dot(h.full() * dir);
    CHECK(q == doctest::Approx(-(1 - tau * tau) / (2 * std::pow(tau, 4)) * dir.squaredNorm()).epsilon(1e-13));
    CHECK(q < 0.0);
  }
}

TEST_CASE("collapse threshold without signal") {
  const MixtureModel flat(MeanConfig::from_rows({{0.0, 0.0}, {0.0, 0.0}}), 1.0);
  CHECK(collapse_report(flat).rho_sq_threshold == 1.0);
}

TEST_CASE("simplex embeds in the leading coordinates") {
  const MeanConfig s = make_regular_simplex(3, 5, 1.0);
  for (int l = 0; l < 3; ++l)
    for (int k = 2; k < 5; ++k) CHECK(s(l, k) == 0.0);
  const MeanConfig t = make_regular_simplex(3, 2, 1.0);
  CHECK(t.mean(0).dot(t.mean(1)) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(geometry(MixtureModel(t, 1.0)).lambda_max == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("common random numbers make monte carlo fits reproducible") {
  const MixtureModel truth(MeanConfig::from_rows({{1.0, 0.5}, {-1.0, -0.5}}), 0.8);
  FitSpec spec = spec_with_tau(0.6);
  spec.mc_samples = 20000;
  spec.seed = 123;
  const PopulationFit a = quasi_mle(truth, spec, truth.means);
  const PopulationFit b = quasi_mle(truth, spec, truth.means);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].objective == b.trace[i].objective);
    CHECK(a.trace[i].perm_dist_to_truth == b.trace[i].perm_dist_to_truth);
  }
  CHECK(a.means == b.means);
}

TEST_CASE("high-snr uniform bound for the under-smoothed quasi-mle") {
  const double eta = 0.02;
  for (double sigma : {0.2, 0.1, 0.05}) {
    const MixtureModel truth(MeanConfig::from_rows({{1.0}, {-1.0}}), sigma);
    const GeometrySummary g = geometry(truth);
    const double bound = 4 * 4 * 1 * (g.delta_max * g.delta_max + sigma * sigma) *
                         std::exp(-(0.125 - eta) * g.delta_min * g.delta_min / (sigma * sigma));
    for (double f : {1.0, 0.5, 0.1}) {
      const PopulationFit fit = quasi_mle(truth, spec_with_tau(f * sigma), truth.means);
      const double d2 = std::pow(perm_distance(fit.means, truth.means), 2);
      if (sigma == 0.2) {
        // The bound only holds below an unspecified sigma_0; report only.
        MESSAGE("sigma 0.2, tau " << f * sigma << ": d^2 = " << d2 << ", bound = " << bound);
      } else {
        // Bounds below the double-precision resolution of the means cannot
        // be resolved by any stationary point.
        const double floor = std::pow(8 * std::numeric_limits<double>::epsilon() * truth.means.frobenius_norm(), 2);
        CHECK_MESSAGE(d2 <= bound + floor, "sigma " << sigma << " tau " << f * sigma);
      }
    }
  }
}

TEST_CASE("trace csv") {
  std::ostringstream out;
  write_trace_csv(out, {{0, 1.5, 0.0, 0.25, 0.0}, {1, 1.25, 0.0, 0.125, 0.5}});
  CHECK(out.str() == "iter,objective,std_error,perm_dist_to_truth,perm_dist_step\n0,1.5,0,0.25,0\n1,1.25,0,0.125,0.5\n");
}
