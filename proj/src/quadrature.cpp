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

#include "mismix/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mismix/error.hpp"

namespace mismix {

GaussLegendreRule gauss_legendre(int order) {
  require(order >= 1, "gauss_legendre: order must be positive");
  static std::mutex cache_mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
    }
    dp = order * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  cache.emplace(order, rule);
  return rule;
}

WeightedEstimate weighted_estimate(const NodeSet& nodes, std::span<const double> values) {
  WeightedEstimate est;
  for (std::size_t i = 0; i < values.size(); ++i) est.mean += nodes.weights[i] * values[i];
  if (nodes.monte_carlo && values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double n = static_cast<double>(values.size());
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

namespace {

struct Breakpoint {
  double location;
  double gap;
};

std::vector<Breakpoint> voronoi_breakpoints(const MeanConfig& candidate) {
  std::vector<double> centers(candidate.K());
  for (int l = 0; l < candidate.K(); ++l) centers[l] = candidate(l, 0);
  std::sort(centers.begin(), centers.end());
  std::vector<double> distinct;
  for (double c : centers) {
    if (distinct.empty() || c - distinct.back() > 1e-12 * (1.0 + std::fabs(c)))
      distinct.push_back(c);
  }
  std::vector<Breakpoint> out;
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
    out.push_back({0.5 * (distinct[i] + distinct[i + 1]), distinct[i + 1] - distinct[i]});
  return out;
}

}  // namespace

NodeSet quadrature_nodes_1d(const MixtureModel& truth, const MeanConfig* candidate, double tau,
                            const QuadratureOptions& options) {
  require(truth.d() == 1, "quadrature_nodes_1d: truth must be one-dimensional");
  NodeSet set;
  const int Kt = truth.K();
  const double component_weight = 1.0 / Kt;

  if (truth.sigma == 0.0) {
    set.points.resize(Kt, 1);
    for (int j = 0; j < Kt; ++j) set.points(j, 0) = truth.means(j, 0);
    set.weights.assign(Kt, component_weight);
    return set;
  }

  const auto breakpoints = candidate ? voronoi_breakpoints(*candidate) : std::vector<Breakpoint>{};
  const GaussLegendreRule gl = gauss_legendre(options.panel_order);
  const int panels = std::max(1, options.nodes_per_component / options.panel_order);
  const double Z = options.tail_z;
  const double width = 2.0 * Z / panels;
  const double sigma = truth.sigma;

  std::vector<double> ys;
  std::vector<double> ws;
  std::vector<double> edges;
  for (int j = 0; j < Kt; ++j) {
    const double center = truth.means(j, 0);
    edges.clear();
    for (int p = 0; p <= panels; ++p) edges.push_back(-Z + p * width);
    for (const auto& bp : breakpoints) {
      const double zb = (bp.location - center) / sigma;
      if (std::fabs(zb) >= Z) continue;
      edges.push_back(zb);
      if (tau <= 0.0) continue;
      double step = tau * tau / (bp.gap * sigma);
      for (int k = 0; k < 80 && step < width; ++k, step *= 2.0) {
        if (zb - step > -Z) edges.push_back(zb - step);
        if (zb + step < Z) edges.push_back(zb + step);
      }
    }
    std::sort(edges.begin(), edges.end());
    std::vector<double> unique_edges;
    for (double e : edges)
      if (unique_edges.empty() || e - unique_edges.back() > 1e-13 * Z) unique_edges.push_back(e);

    for (std::size_t p = 0; p + 1 < unique_edges.size(); ++p) {
      const double a = unique_edges[p];
      const double b = unique_edges[p + 1];
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (int q = 0; q < options.panel_order; ++q) {
        const double z = mid + half * gl.nodes[q];
        const double density = std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
        ys.push_back(center + sigma * z);
        ws.push_back(component_weight * half * gl.weights[q] * density);
      }
    }
  }
  set.points.resize(static_cast<Eigen::Index>(ys.size()), 1);
  for (std::size_t i = 0; i < ys.size(); ++i) set.points(static_cast<Eigen::Index>(i), 0) = ys[i];
  set.weights = std::move(ws);
  return set;
}

NodeSet monte_carlo_pool(const MixtureModel& truth, std::size_t n, std::uint64_t seed) {
  NodeSet set;
  set.points = sample_gmm(truth, n, seed).observations;
  set.weights.assign(n, 1.0 / static_cast<double>(n));
  set.monte_carlo = true;
  return set;
}

}  // namespace mismix
