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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mismix/core_model.hpp"

namespace mismix {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int order);

/// A weighted point set standing in for the true law of Y. On the
/// quadrature path the weights integrate the mixture density; on the Monte
/// Carlo path they are 1/n over a frozen pool of draws.
struct NodeSet {
  Observations points;
  std::vector<double> weights;
  bool monte_carlo = false;

  std::size_t size() const { return weights.size(); }
};

/// Mean and standard error of per-node values under a node set. The
/// standard error is zero on the quadrature path.
struct WeightedEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
WeightedEstimate weighted_estimate(const NodeSet& nodes, std::span<const double> values);

struct QuadratureOptions {
  /// Nodes per true component on the uniform panels; rounded to whole panels.
  int nodes_per_component = 256;
  int panel_order = 16;
  /// Integration range in standardized units, |z| <= tail_z.
  double tail_z = 12.0;
};

/// Composite Gauss-Legendre rule for a one-dimensional mixture. Panel edges
/// are placed at the Voronoi breakpoints of `candidate` (so hard-assignment
/// integrands are integrated piecewise-smoothly) and refined geometrically
/// around each breakpoint down to the soft-assignment width tau^2 / gap.
/// tau = 0 means hard assignment (no refinement).
NodeSet quadrature_nodes_1d(const MixtureModel& truth, const MeanConfig* candidate, double tau,
                            const QuadratureOptions& options = {});

/// Frozen common-random-numbers pool drawn from the true mixture.
NodeSet monte_carlo_pool(const MixtureModel& truth, std::size_t n, std::uint64_t seed);

}  // namespace mismix
