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

// Independent reference computations shared by the unit and acceptance
// tests. None of this is used by the library.
#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "mismix/core_model.hpp"

namespace mismix::oracle {

/// min over all K! relabelings of the squared costs, summed in row order.
inline double brute_force_assignment_cost(const Eigen::MatrixXd& cost) {
  std::vector<int> perm(cost.rows());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int r = 0; r < cost.rows(); ++r) s += cost(r, perm[r]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double brute_force_perm_distance(const MeanConfig& a, const MeanConfig& b) {
  return std::sqrt(brute_force_assignment_cost(pairwise_sq_distances(a, b)));
}

/// Central second differences of f around `at`, entry (i, j) in the
/// flattened row-major K x d coordinates.
inline Eigen::MatrixXd finite_difference_hessian(const std::function<double(const MeanConfig&)>& f,
                                                 const MeanConfig& at, double h) {
  const int n = at.K() * at.d();
  auto shifted = [&](int i, double si, int j, double sj) {
    MeanConfig m = at;
    m.matrix().data()[i] += si;
    m.matrix().data()[j] += sj;
    return f(m);
  };
  Eigen::MatrixXd H(n, n);
  const double f0 = f(at);
  for (int i = 0; i < n; ++i) {
    H(i, i) = (shifted(i, h, i, 0.0) - 2.0 * f0 + shifted(i, -h, i, 0.0)) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      H(i, j) = (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) + shifted(i, -h, j, -h)) /
                (4.0 * h * h);
      H(j, i) = H(i, j);
    }
  }
  return H;
}

}  // namespace mismix::oracle
